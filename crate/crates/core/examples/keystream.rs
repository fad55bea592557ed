//! Generate keystream for a key and IV given on the command line.
//!
//! ```text
//! cargo run --example keystream -- 000102030405060708090a0b0c0d0e0f 2021 64
//! ```

use dicing::{Dicing, Variant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let key = hex::decode(args.next().unwrap_or_else(|| "000102030405060708090a0b0c0d0e0f".into()))?;
    let mut iv = [0u8; 32];
    let iv_in = hex::decode(args.next().unwrap_or_default())?;
    iv[..iv_in.len().min(32)].copy_from_slice(&iv_in[..iv_in.len().min(32)]);
    let len: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(64);

    let mut cipher = Dicing::new(&key, &iv, Variant::Standard)?;
    for block in cipher.keystream(len).chunks(16) {
        println!("{}", hex::encode(block));
    }
    Ok(())
}
