//! Independent numerics: exact coefficients against contour quadrature, and pointwise identities.

use qforms::fourier::{chi_coefficient, CoefficientSpec};
use qforms::numeric::eval::eval_phased;
use qforms::numeric::verify::{self, fourier_quadrature, sample_points, series_order_for};
use qforms::numeric::PrecisionContext;
use qforms::q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qforms::Result<()> {
    let ctx = PrecisionContext::new(160);
    let tau = ctx.c(0.1, 1.4);
    for (m, n, r) in [(0u32, 1u32, q(1, 2)), (0, 3, q(3, 2)), (2, 1, q(1, 2)), (2, 2, q(1, 1))] {
        let spec = CoefficientSpec::new(m / 2, n, r.clone(), series_order_for(&tau, &ctx));
        let exact = eval_phased(&chi_coefficient(&spec)?, &tau, &ctx);
        let num = fourier_quadrature(m, n + m, &r, &tau, &ctx)?;
        println!("phi_{{{m},{}}} r={r}: exact {:?} quadrature {:?} difference {:.1e}", n + m, exact.to_f64_pair(), num.to_f64_pair(), (&exact - &num).abs_f64());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (z, tau) in sample_points(2, &mut rng, &ctx) {
        for rep in [
            verify::verify_theta_forms(&z, &tau, &ctx)?,
            verify::verify_crank_partial_fraction(&z, &tau, &ctx)?,
            verify::verify_phicrank(3, &z, &tau, &ctx)?,
            verify::verify_appell_decomposition(2, 1, &z, &tau, &ctx)?,
            verify::verify_rank_crank_pde(&z, &tau, &ctx)?,
        ] {
            println!("{:<32} {:.2e} {}", rep.identity, rep.residual, if rep.passed { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}
