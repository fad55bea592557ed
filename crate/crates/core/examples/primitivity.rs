//! Verify that x generates the multiplicative group of each projector field.

use std::time::Instant;

use dicing::gf2x::{FIELD_E1, FIELD_E2, FIELD_E3, FIELD_E4, FIELD_HAT};
use dicing::verify::{check_byte_field, check_projector_fields};

fn main() -> dicing::Result<()> {
    let start = Instant::now();
    for f in [&*FIELD_E1, &*FIELD_E2, &*FIELD_E3, &*FIELD_E4, &*FIELD_HAT] {
        println!("{:<4} exponents {:?}", f.name(), f.exponents());
    }
    for c in check_projector_fields()? {
        println!("{}: x primitive = {}", c.field, c.primitive);
    }
    let (irreducible, order) = check_byte_field()?;
    println!("byte field: modulus irreducible = {irreducible}, order of x = {order}");
    println!("done in {:.2?}", start.elapsed());
    Ok(())
}
