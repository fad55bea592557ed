//! The fast subset of checks behind `dicing selftest`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{
    check_byte_field, check_projector_fields, check_prop1_arithmetic, constant_c_interval,
    mini_period_experiment, statistical_suite, MiniParams, MIN_STREAM_BYTES,
};
use crate::engine::{Dicing, Variant};
use crate::init::{compute_c, InitVector, CONSTANT_C};
use crate::keyschedule::{sbox0, KeyMaterial};

/// Known-answer vector: key `00 01 .. 0f`, IV `20 21 .. 3f`, standard mode.
pub const KAT_KEY: [u8; 16] = [
    0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f,
];
pub const KAT_IV: [u8; 32] = [
    0x20, 0x21, 0x22, 0x23, 0x24, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2a, 0x2b, 0x2c, 0x2d, 0x2e, 0x2f,
    0x30, 0x31, 0x32, 0x33, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x3b, 0x3c, 0x3d, 0x3e, 0x3f,
];
pub const KAT_STREAM: [u8; 32] = [
    0xda, 0xe4, 0xeb, 0x09, 0x04, 0x30, 0x2a, 0xdd, 0xb2, 0x8d, 0x98, 0x4b, 0x2d, 0xb2, 0xda, 0x0f,
    0x6a, 0xc0, 0xd5, 0x10, 0x73, 0x81, 0x22, 0x9f, 0x09, 0xf7, 0xd1, 0x06, 0x6b, 0x9c, 0x43, 0x80,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfTestReport {
    pub checks: Vec<CheckResult>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

fn check(name: &'static str, outcome: Result<String, String>) -> CheckResult {
    match outcome {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn ensure(cond: bool, ok: impl Into<String>, err: impl Into<String>) -> Result<String, String> {
    if cond {
        Ok(ok.into())
    } else {
        Err(err.into())
    }
}

/// Runs every check against the key material of [`KAT_KEY`].
pub fn run() -> SelfTestReport {
    run_with_key_material(KeyMaterial::new(&KAT_KEY).expect("16-byte key"))
}

/// Runs every check; the key-dependent ones use `km`, which is expected to
/// come from [`KAT_KEY`].
pub fn run_with_key_material(km: KeyMaterial) -> SelfTestReport {
    let km = Arc::new(km);
    let mut checks = Vec::new();

    checks.push(check(
        "projector fields primitive",
        match check_projector_fields() {
            Ok(list) => {
                let bad: Vec<_> = list.iter().filter(|c| !c.primitive).map(|c| c.field.clone()).collect();
                ensure(bad.is_empty(), "E1 E2 E3 E4", format!("x not primitive in {bad:?}"))
            }
            Err(e) => Err(e.to_string()),
        },
    ));

    checks.push(check(
        "byte field modulus irreducible",
        match check_byte_field() {
            Ok((irreducible, order)) => ensure(
                irreducible,
                format!("order of x = {order}"),
                "modulus has a factor",
            ),
            Err(e) => Err(e.to_string()),
        },
    ));

    let prop1 = check_prop1_arithmetic();
    checks.push(check(
        "period identities",
        ensure(
            prop1.all_hold(),
            format!("{} identities exact", prop1.checks.len()),
            format!("{:?}", prop1.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect::<Vec<_>>()),
        ),
    ));

    checks.push(check(
        "mini period experiment",
        match MiniParams::new(5, 3, 8) {
            Ok(p) => {
                let r = mini_period_experiment(&p);
                ensure(
                    r.matches,
                    format!("(5,3,8): dice period {}, omega period {}", r.measured_controller_period, r.measured_omega_period),
                    format!("{r:?}"),
                )
            }
            Err(e) => Err(e.to_string()),
        },
    ));

    checks.push(check(
        "constant c",
        {
            let sum = compute_c();
            let interval = constant_c_interval(320);
            ensure(
                sum.to_bytes_le() == CONSTANT_C && interval.as_ref() == Some(&sum),
                "series and interval bounds agree",
                "floor(e * 57!) mismatch",
            )
        },
    ));

    checks.push(check(
        "base S-box anchors",
        ensure(sbox0(0x03) == 0x00 && sbox0(0x02) == 0x05, "S0(3)=0, S0(2)=5", "anchor mismatch"),
    ));

    checks.push(check(
        "S-box table",
        {
            let sbox = km.sbox();
            let definitional = (0..=255u8).all(|x| sbox.apply(x) == sbox0(x ^ km.v2().0) ^ km.v1().0);
            ensure(
                sbox.is_permutation() && definitional,
                "permutation matching S0(x ^ V2) ^ V1",
                "S-box table damaged",
            )
        },
    ));

    checks.push(check(
        "Q tables",
        {
            let mut rng = ChaCha20Rng::seed_from_u64(1);
            let ok = (0..1000).all(|_| {
                let w: [u8; 4] = rng.gen();
                let mut fast = w;
                km.q_apply(&mut fast);
                fast == km.lmap().apply_word(w.map(|b| km.sbox().apply(b)))
            });
            ensure(ok, "table path equals S then L", "table path diverges")
        },
    ));

    checks.push(check(
        "known-answer vector",
        {
            let mut d = Dicing::with_key_material(km.clone(), &InitVector(KAT_IV), Variant::Standard);
            let out = d.keystream(KAT_STREAM.len());
            ensure(out == KAT_STREAM, hex::encode(&out), format!("got {}", hex::encode(&out)))
        },
    ));

    checks.push(check(
        "encrypt/decrypt roundtrip",
        {
            let msg: Vec<u8> = (0..1000u32).map(|i| (i * 7) as u8).collect();
            let mut buf = msg.clone();
            let iv = InitVector(KAT_IV);
            Dicing::with_key_material(km.clone(), &iv, Variant::Standard).apply_keystream(&mut buf);
            let changed = buf != msg;
            Dicing::with_key_material(km.clone(), &iv, Variant::Standard).apply_keystream(&mut buf);
            ensure(changed && buf == msg, "1000 bytes", "roundtrip mismatch")
        },
    ));

    checks.push(check(
        "keystream statistics (1 MiB)",
        {
            let stream = Dicing::with_key_material(km.clone(), &InitVector(KAT_IV), Variant::Standard)
                .keystream(MIN_STREAM_BYTES);
            match statistical_suite(&stream) {
                Ok(r) => ensure(r.all_passed(), "monobit, chi-square, runs, serial", format!("failed {:?}", r.failures())),
                Err(e) => Err(e.to_string()),
            }
        },
    ));

    SelfTestReport { checks }
}
