//! Elliptic and modular transformation laws of ϑ and of the weight 1/2 and 3/2 thetas.

use qforms::numeric::verify::{multiplier, sample_gamma1, sample_points, verify_partial_theta_modular, verify_theta_elliptic, verify_theta_modular};
use qforms::numeric::PrecisionContext;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qforms::Result<()> {
    let ctx = PrecisionContext::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (z, tau) = sample_points(1, &mut rng, &ctx).remove(0);
    let rep = verify_theta_elliptic(2, -1, &z, &tau, &ctx)?;
    println!("{:<48} {:.2e}", rep.identity, rep.residual);
    let g = sample_gamma1(1, &mut rng);
    for rep in verify_theta_modular(&g, &z, &tau, &ctx)? {
        println!("{:<48} {:.2e}", rep.identity, rep.residual);
    }
    for n in [2u32, 4, 6] {
        let g = sample_gamma1(n, &mut rng);
        println!("N={n} gamma=[[{}, {}], [{}, {}]] multiplier {:?}", g.a, g.b, g.c, g.d, multiplier(n, 1, &g, &ctx).to_f64_pair());
        for rep in verify_partial_theta_modular(n, 1 % (n as i64 / 2).max(1), &g, &tau, &ctx)? {
            println!("    {:<56} {:.2e}", rep.identity, rep.residual);
        }
    }
    Ok(())
}
