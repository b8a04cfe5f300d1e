//! Radial asymptotics at rationals from both half-planes, and the Eichler cocycle.

use qforms::numeric::verify::Gamma;
use qforms::numeric::PrecisionContext;
use qforms::quantum::{self, RationalPoint};

fn main() -> qforms::Result<()> {
    let ctx = PrecisionContext::new(128);
    let ts = [0.2, 0.1, 0.05, 0.025];
    for (n, r, p) in [(2u32, 0i64, "1/2"), (4, 1, "1/2"), (2, 1, "1/4")] {
        let p = RationalPoint::parse(p)?;
        let rep = quantum::theta_limit_checks(n, r, &p, &ts, &[1, 2, 3], &ctx)?;
        println!("N={n} r={r} at {p}: a_0 = {:?}", rep.coeffs[0]);
        for row in &rep.rows {
            println!("    {} terms: upper slopes {:.2?} lower slopes {:.2?}", row.terms, row.upper_slopes, row.lower_slopes);
        }
    }

    let tau = ctx.c(0.3, -0.8);
    let series = quantum::eichler_star(4, 1, &tau, &ctx)?;
    let integral = quantum::eichler_star_quadrature(4, 1, &tau, &ctx)?;
    println!("Eichler integral at 0.3-0.8i: series {:?} quadrature {:?}", series.to_f64_pair(), integral.to_f64_pair());
    let g = Gamma::new(1, 0, 8, 1)?;
    let (lhs, rhs) = quantum::cocycle_residual(4, 1, &g, &tau, &ctx)?;
    println!("cocycle for [[1, 0], [8, 1]]: {:?} vs {:?}", lhs.to_f64_pair(), rhs.to_f64_pair());
    Ok(())
}
