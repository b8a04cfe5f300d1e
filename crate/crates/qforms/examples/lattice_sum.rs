//! The root-lattice sum for 1/ϑ^N against the mixed partial theta form.

use qforms::fourier::{chi_coefficient, CoefficientSpec};
use qforms::lattice::{full_lattice_theta, lattice_coefficient, n1_coefficient, RootSystem, TrConvention};
use qforms::q;
use rug::Rational;

fn main() -> qforms::Result<()> {
    let order = Rational::from(10);
    let rs = RootSystem::new(4)?;
    println!("A_3: {} positive roots, smallest Gram eigenvalue {:.3}", rs.positive_roots.len(), rs.min_eigenvalue());
    println!("A_2 theta series: {}", full_lattice_theta(3, &Rational::from(3))?);

    for n in 2..=5u32 {
        for k in 0..3i64 {
            let r = Rational::from(k) + q(n as i64 % 2, 2);
            let (lat, terms) = lattice_coefficient(n, &r, &order, TrConvention::Verified)?;
            let chi = chi_coefficient(&CoefficientSpec::new(0, n, r.clone(), order.clone()))?;
            let (printed, _) = lattice_coefficient(n, &r, &order, TrConvention::AsPrinted)?;
            println!(
                "N={n} r={r}: {terms:>4} lattice points, agrees {}, sign-flipped convention agrees {}",
                lat.agrees_with(&chi),
                printed.agrees_with(&chi)
            );
        }
    }
    println!("1/theta at zeta^(3/2): i * ({})", n1_coefficient(&q(3, 2), &order)?.series);
    Ok(())
}
