//! Inspect the key-dependent S-box and diffusion layer.

use dicing::keyschedule::{sbox0, KeyMaterial};

fn main() {
    let km = KeyMaterial::new(b"sixteen byte key").expect("16-byte key");
    println!("lambda  {}", hex::encode(km.lambda()));
    println!("V1 {:08b}  V2 {:08b}", km.v1().0, km.v2().0);
    println!("A rows  {:02x?}", km.lmap().a.rows());
    println!("B rows  {:02x?}", km.lmap().b.rows());
    println!("L invertible: {}", km.lmap().is_invertible());
    println!("S-box permutation: {}", km.sbox().is_permutation());
    for row in km.sbox().table().chunks(16) {
        println!("  {}", hex::encode(row));
    }
    println!("S0(03) = {:02x}, S0(02) = {:02x}", sbox0(0x03), sbox0(0x02));
    let block = *b"0123456789abcdef";
    println!("Q(\"0123456789abcdef\") = {}", hex::encode(km.q_block(&block)));
}
