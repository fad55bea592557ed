//! DICING: a clock-controlled synchronous stream cipher built from
//! "projectors", field elements stepped by powers of `x`.
//!
//! Two controller projectors over `GF(2^127)` and `GF(2^126)` throw a dice
//! byte each cycle; it picks how far the two combiner projectors over
//! `GF(2^128)` advance. The combiner states are accumulated into two
//! memorizers and pushed through a key-defined S-box and diffusion layer to
//! produce 16 keystream bytes per cycle.
//!
//! ```
//! use dicing::{Dicing, Variant};
//!
//! let key = [0x42u8; 16];
//! let iv = [0x17u8; 32];
//! let mut msg = *b"attack at dawn";
//!
//! Dicing::new(&key, &iv, Variant::Standard)?.apply_keystream(&mut msg);
//! assert_ne!(&msg, b"attack at dawn");
//! Dicing::new(&key, &iv, Variant::Standard)?.apply_keystream(&mut msg);
//! assert_eq!(&msg, b"attack at dawn");
//! # Ok::<(), dicing::Error>(())
//! ```
//!
//! Modules:
//!
//! * [`gf2x`]: binary field arithmetic and the published moduli.
//! * [`keyschedule`]: S-box, diffusion layer, key whitening strings.
//! * [`init`]: IV setup.
//! * [`engine`]: the generator and its reduced variants.
//! * [`verify`]: period experiments, exact identities, statistics.
//! * [`cli`]: the `dicing` command-line tool.

pub mod arith;
pub mod cli;
pub mod engine;
mod error;
pub mod gf2x;
pub mod init;
pub mod keyschedule;
pub mod verify;

pub use engine::{Dicing, EngineState, Variant};
pub use error::{Error, Result};
pub use init::{InitVector, InitializedState};
pub use keyschedule::KeyMaterial;
