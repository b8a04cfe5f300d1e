//! Finite values of the partial theta functions at roots of unity.

use qforms::numeric::PrecisionContext;
use qforms::quantum::{self, ExactIdentity, RationalPoint};
use rug::Rational;

fn main() -> qforms::Result<()> {
    let ctx = PrecisionContext::new(160);
    for (n, r, p) in [(2u32, 1i64, "1/4"), (2, 0, "1/2"), (4, 1, "1/2"), (6, 2, "1/6"), (4, 0, "3/4")] {
        let p = RationalPoint::parse(p)?;
        if !quantum::quantum_member(n, r, &p)? {
            println!("N={n} r={r}: {p} is not in the quantum set");
            continue;
        }
        let v = quantum::root_of_unity_value(n, r, &p, &ctx)?;
        println!(
            "N={n} r={r} at {p} ({:?}): finite {:?} L-value {:?} limit {:?} spread {:.1e}",
            v.branch, v.finite, v.leading, v.limit, v.max_discrepancy
        );
    }
    for id in ExactIdentity::ALL {
        println!("{id:?} holds to q^20: {}", quantum::identity_holds(id, &Rational::from(20), 6)?);
    }
    Ok(())
}
