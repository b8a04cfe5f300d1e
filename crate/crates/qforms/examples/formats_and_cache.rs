//! JSON, CSV and the checksummed on-disk cache.

use qforms::fourier::{chi_coefficient, CoefficientSpec};
use qforms::io::{decode, encode, from_csv, from_json_str, to_csv, to_json_string, Cache};
use qforms::q;
use rug::Rational;

fn main() -> qforms::Result<()> {
    let spec = CoefficientSpec::new(0, 3, q(3, 2), Rational::from(3));
    let s = chi_coefficient(&spec)?.series;
    let json = to_json_string(&s);
    println!("{json}");
    print!("{}", to_csv(&s));
    assert!(from_json_str(&json)?.identical(&s));
    assert!(from_csv(&to_csv(&s))?.agrees_with(&s));

    let bytes = encode(&s);
    println!("{} cache bytes, header {:?}", bytes.len(), &bytes[..4]);
    let mut bad = bytes.clone();
    bad[12] ^= 1;
    println!("flipped byte: {:?}", decode(&bad).err());

    let dir = std::env::temp_dir().join("qforms-example-cache");
    let cache = Cache::from_env(&dir);
    let key = "phi_{0,3} r=3/2 order 3";
    let (_, hit) = cache.get_or_compute(key, || Ok(s.clone()))?;
    let (_, hit2) = cache.get_or_compute(key, || Ok(s.clone()))?;
    println!("cache at {}: first hit {hit}, second hit {hit2}", cache.dir().display());
    Ok(())
}
