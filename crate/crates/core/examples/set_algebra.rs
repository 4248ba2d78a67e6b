//! Terminal-level sets: parsing, complements, monotone images and standard
//! Gaussian measure.

use efficient_index::{IntervalUnion, MonotoneMap};

fn main() -> efficient_index::Result<()> {
    let e: IntervalUnion = "(-inf,-1.645]u[1.645,inf)".parse()?;
    println!("E            = {e}");
    println!("complement   = {}", e.complement());
    println!("N(E)         = {:.5}", e.gaussian_measure());
    println!("exp(E)       = {}", e.map(MonotoneMap::Exp));
    println!("2 - E        = {}", e.map(MonotoneMap::affine(-1.0, 2.0)?));
    let positive: IntervalUnion = "(0,0.5]u[2,4)".parse()?;
    println!("1/x image    = {}", positive.map(MonotoneMap::reciprocal(1.0)?));
    Ok(())
}
