//! Encrypt and decrypt a file with the same key and IV.

use std::fs;

use dicing::cli::crypt_file;
use dicing::{Dicing, Variant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let key = [0x2bu8; 32];
    let iv = *b"example initialisation vector 01";

    let dir = tempfile::tempdir()?;
    let plain = dir.path().join("message.txt");
    let sealed = dir.path().join("message.bin");
    let opened = dir.path().join("message.out");
    fs::write(&plain, "attack at dawn, bring snacks\n".repeat(100))?;

    crypt_file(&mut Dicing::new(&key, &iv, Variant::Standard)?, &plain, &sealed)?;
    crypt_file(&mut Dicing::new(&key, &iv, Variant::Standard)?, &sealed, &opened)?;

    let ciphertext = fs::read(&sealed)?;
    println!("ciphertext starts {}", hex::encode(&ciphertext[..32]));
    assert_eq!(fs::read(&plain)?, fs::read(&opened)?);
    println!("{} bytes round-tripped", ciphertext.len());
    Ok(())
}
