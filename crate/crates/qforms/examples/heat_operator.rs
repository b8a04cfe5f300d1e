//! Laurent coefficients about z = 0 and the heat-operator decomposition.

use qforms::jacobi::{euler_numbers, hankel_nonvanishing, heat_decomposition, phi_laurent};
use qforms::numeric::verify::verify_heat_decomposition;
use qforms::numeric::PrecisionContext;
use rug::Rational;

fn main() -> qforms::Result<()> {
    let l = phi_laurent(2, 5, 3, &Rational::from(6))?;
    for j in [5i64, 3, 1, -1] {
        println!("D_{j} = {}", l.d(j).series);
    }

    println!("sec^3 Taylor data: {:?}", euler_numbers(3, 8));
    for n in 1..=4u32 {
        let dets: Vec<String> = (1..=4).map(|m| hankel_nonvanishing(n, m).map(|d| d.to_string())).collect::<Result<_, _>>()?;
        println!("N={n} Hankel determinants {}", dets.join(" "));
    }

    let ctx = PrecisionContext::new(128);
    let (z, tau) = (ctx.c(0.31, 0.17), ctx.c(0.11, 1.3));
    for (n, m) in [(1u32, 1u32), (2, 1), (1, 2)] {
        let h = heat_decomposition(n, m, &Rational::from(20))?;
        let rep = verify_heat_decomposition(&h, &z, &tau, &ctx)?;
        println!("(N, M) = ({n}, {m}): f_0 = {}", h.f[0].truncate(&Rational::from(2)));
        println!("    Taylor residual zero through x^{}, pointwise residual {:.2e}", h.residual_checked_through, rep.residual);
    }
    Ok(())
}
