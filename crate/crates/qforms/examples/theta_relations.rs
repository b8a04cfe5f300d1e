//! Unary theta functions, their partial versions and the quasimodular kernel.

use qforms::theta::{quasimodular_kernel, theta_series, theta_sum_diff, tn_determinant_ratio, ThetaSpec, Variant};
use qforms::q;
use rug::Rational;

fn main() -> qforms::Result<()> {
    let order = Rational::from(8);
    for v in [Variant::Full, Variant::Tilde, Variant::Partial, Variant::PartialPlus, Variant::PartialMinus] {
        let s = theta_series(&ThetaSpec::new(4, Rational::from(1), 1, v), &order)?;
        println!("{v:?} (N=4, r=1, weight 3/2): {s}");
    }
    let (plus, minus) = theta_sum_diff(4, 1, &order)?;
    println!("Theta+ = {plus}\nTheta- = {minus}");

    for n in [3u32, 4, 5, 6] {
        let k = quasimodular_kernel(n, &Rational::from(12))?;
        println!("N={n}: kernel of length {} certified to q^{}", k.entries.len(), k.certified_order);
        for (j, f) in k.entries.iter().enumerate() {
            println!("    f_{j} = {}", f.truncate(&q(3, 1)));
        }
    }
    for n in [4u32, 6, 8] {
        let r = tn_determinant_ratio(n, &Rational::from(10))?;
        println!("det T_{n} / eta^k = {}", r.coeff(&Rational::new()));
    }
    Ok(())
}
