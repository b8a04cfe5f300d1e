//! Truncated q-series: eta products, Eisenstein series and the Serre derivative.

use qforms::gens::{e2, eisenstein, eta, eta_power, serre};
use qforms::q;
use rug::Rational;

fn main() -> qforms::Result<()> {
    let order = Rational::from(12);
    let e = eta(&order);
    println!("eta      = {e}");
    println!("eta^-1   = {}", e.try_inv()?);
    println!("eta^24   = {}", eta_power(24, &order));

    let e4 = eisenstein(4, &order)?;
    let e6 = eisenstein(6, &order)?;
    println!("G4       = {e4}");
    println!("G6       = {e6}");
    println!("E2       = {}", e2(&order));

    // the Serre derivative of E4 is a multiple of E6
    let d = serre(&q(4, 1), &eisenstein(4, &order)?.scale(&Rational::from(240)));
    let target = eisenstein(6, &order)?.scale(&Rational::from(-504)).scale(&q(-1, 3));
    println!("serre(E4) = -E6/3: {}", d.agrees_with(&target));
    Ok(())
}
