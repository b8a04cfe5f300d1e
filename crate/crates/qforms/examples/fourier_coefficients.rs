//! Fourier coefficients of φ_{2M,N+2M} as mixed partial theta functions.

use qforms::fourier::{chi_coefficient, mixed_decomposition, CoefficientSpec};
use qforms::io::to_csv;
use qforms::q;
use rug::Rational;

fn main() -> qforms::Result<()> {
    for (m, n, r) in [(0, 1, q(1, 2)), (0, 4, q(2, 1)), (1, 1, q(1, 2)), (2, 3, q(3, 2))] {
        let spec = CoefficientSpec::new(m, n, r.clone(), Rational::from(6));
        let chi = chi_coefficient(&spec)?;
        let phase = if chi.ipow == 1 { "i" } else { "1" };
        println!("phi_{{{},{}}} at zeta^{r}: {phase} * ({})", 2 * m, n + 2 * m, chi.series);
        for t in mixed_decomposition(&spec)? {
            println!("    D_q^{} Theta  x  {}", t.derivative_order, t.prefactor.series);
        }
    }
    let spec = CoefficientSpec::new(1, 1, q(1, 2), Rational::from(4));
    print!("{}", to_csv(&chi_coefficient(&spec)?.series));
    Ok(())
}
