//! Quantum sets, Gauss sums, the periodic sequence γ and its L-values.

use qforms::numeric::PrecisionContext;
use qforms::q;
use qforms::quantum::{self, GaussClause, RationalPoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qforms::Result<()> {
    let ctx = PrecisionContext::new(128);
    for (n, r) in [(2u32, 0i64), (2, 1), (4, 1), (6, 3)] {
        let pts: Vec<String> = ["1/2", "1/3", "1/4", "3/8", "5/6"]
            .iter()
            .map(|s| RationalPoint::parse(s))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|p| quantum::quantum_member(n, r, p).unwrap_or(false))
            .map(|p| p.to_string())
            .collect();
        println!("N={n} r={r} branch {:?}: members among 1/2 1/3 1/4 3/8 5/6: {}", quantum::branch(n, r)?, pts.join(" "));
    }

    for (a, b, c) in [(2, 1, 4), (1, 1, 4), (1, 0, 6), (1, 0, 5)] {
        let g = quantum::gauss_sum(a, b, c, &ctx)?;
        let clause = quantum::gauss_vanishing(a, b, c);
        println!("G({a},{b},{c}) = {:?} clause {clause:?}", g.to_f64_pair());
        assert!(clause == GaussClause::None || g.abs_f64() < 1e-30);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = quantum::sample_quantum_points(4, 1, 1, &mut rng)?.remove(0);
    let g = quantum::gamma_seq(4, 1, &p, &ctx)?;
    println!("gamma_(4,1) at {p}: period {}, parity {:?}, |mean| {:.1e}", g.period(), g.parity, g.mean_value().abs_f64());
    for m in [1u32, 3, 5] {
        let a = quantum::l_value(m, &g, &ctx)?;
        let b = quantum::l_value_abel(m, &g, &ctx)?;
        println!("    L(-{m}) Bernoulli {:?} Abel {:?}", a.to_f64_pair(), b.to_f64_pair());
    }
    let alt = [q(-1, 1), q(1, 1)];
    println!("L(-1, (1,-1)) = {} = {}", quantum::l_value_exact(1, &alt)?, quantum::l_value_abel_exact(1, &alt)?);
    Ok(())
}
