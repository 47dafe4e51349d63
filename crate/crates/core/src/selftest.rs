//! Quick invariant suite behind `irs selftest`.

use std::sync::Arc;

use crate::bounds::{self, BoundsInput};
use crate::collab;
use crate::gf::{Field, FieldElement};
use crate::irs::{self, ErrorMode};
use crate::rs_code::{RsSpec, Variant};
use crate::sim::{self, SimConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(), String>) -> Check {
    match f() {
        Ok(()) => Check { name, passed: true, detail: String::new() },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn field_axioms() -> Result<(), String> {
    for (w, p) in [(3, 0xB), (4, 0x13), (8, 0x11D)] {
        let f = Field::new(w, p).map_err(|e| e.to_string())?;
        let q = f.size() as u16;
        for a in 1..q {
            let a = FieldElement(a);
            let inv = f.inv(a).map_err(|e| e.to_string())?;
            if f.mul(a, inv) != FieldElement::ONE {
                return Err(format!("GF(2^{w}): {a:?} * inv != 1"));
            }
            if f.pow(a, (q - 1) as u64) != FieldElement::ONE {
                return Err(format!("GF(2^{w}): {a:?}^(q-1) != 1"));
            }
        }
    }
    Ok(())
}

fn duality() -> Result<(), String> {
    for (w, p) in [(3, 0xB), (4, 0x13)] {
        let f = Arc::new(Field::new(w, p).map_err(|e| e.to_string())?);
        for k in 1..f.size() {
            let spec = RsSpec::new(f.clone(), k, Variant::Extended).map_err(|e| e.to_string())?;
            let g = spec.lifted_generator_matrix();
            let h = spec.parity_check_matrix();
            if !g.mul(&f, &h.transpose()).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("G H^T != 0 for q={} k={k}", f.size()));
            }
        }
    }
    Ok(())
}

fn theorem_one() -> Result<(), String> {
    let spec = RsSpec::new(Arc::new(Field::new(3, 0xB).unwrap()), 3, Variant::Extended).unwrap();
    for f in 1..=4 {
        let stats = sim::run(&SimConfig::new(spec.clone(), 4, ErrorMode::FixedFIndependent(f), 500, f as u64))
            .map_err(|e| e.to_string())?;
        if stats.successes != stats.trials {
            return Err(format!("f={f}: {} of {} decoded", stats.successes, stats.trials));
        }
    }
    Ok(())
}

fn flagship_roundtrip() -> Result<(), String> {
    let spec = RsSpec::dvb_204_188();
    let stats =
        sim::run(&SimConfig::new(spec, 16, ErrorMode::FixedFIndependent(15), 20, 7)).map_err(|e| e.to_string())?;
    if stats.successes != stats.trials {
        return Err(format!("{} of {} decoded", stats.successes, stats.trials));
    }
    Ok(())
}

fn cyclic_dummy() -> Result<(), String> {
    use rand::{Rng, SeedableRng};
    let spec = RsSpec::new(Arc::new(Field::new(3, 0xB).unwrap()), 3, Variant::Cyclic).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let l = 4;
    let mut done = 0;
    while done < 300 {
        let data = (0..spec.k() * l).map(|_| FieldElement(rng.random_range(0..8))).collect();
        let info = crate::matrix::Matrix::from_vec(spec.k(), l, data).map_err(|e| e.to_string())?;
        let pattern = irs::sample_error_pattern(spec.field(), spec.n(), l, ErrorMode::FixedFIndependent(3), &mut rng)
            .map_err(|e| e.to_string())?;
        let (count, rank) = sim::lifted_error_rank(&spec, &info, &pattern);
        if count != rank {
            continue;
        }
        let sent = irs::encode_irs(&info, &spec).map_err(|e| e.to_string())?;
        let y = irs::apply_errors(&sent, &pattern).map_err(|e| e.to_string())?;
        match collab::decode(&y, &spec).map_err(|e| e.to_string())? {
            collab::DecodeOutcome::Success(d) if d.word == sent => done += 1,
            other => return Err(format!("{other:?}")),
        }
    }
    Ok(())
}

fn dependent_rows_never_succeed() -> Result<(), String> {
    let spec = RsSpec::new(Arc::new(Field::new(4, 0x13).unwrap()), 9, Variant::Extended).unwrap();
    let stats = sim::run(&SimConfig::new(spec, 4, ErrorMode::DependentRows(3), 500, 3)).map_err(|e| e.to_string())?;
    if stats.successes != 0 || !stats.is_consistent() {
        return Err(format!("{stats:?}"));
    }
    Ok(())
}

fn incremental_agrees() -> Result<(), String> {
    use rand::SeedableRng;
    let spec = RsSpec::new(Arc::new(Field::new(4, 0x13).unwrap()), 9, Variant::Extended).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let l = 5;
    let sent = irs::encode_irs(&crate::matrix::Matrix::zeros(spec.k(), l), &spec).map_err(|e| e.to_string())?;
    for f in 1..=5 {
        let pattern = irs::sample_error_pattern(spec.field(), spec.n(), l, ErrorMode::FixedF(f), &mut rng)
            .map_err(|e| e.to_string())?;
        let y = irs::apply_errors(&sent, &pattern).map_err(|e| e.to_string())?;
        let a = collab::decode(&y, &spec).map_err(|e| e.to_string())?;
        let b = collab::decode_incremental(&y, &spec, l).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("f={f}: {a:?} vs {b:?}"));
        }
    }
    Ok(())
}

fn bounds_sane() -> Result<(), String> {
    let base = BoundsInput::new(256, 16, 16, 204, 0.0).map_err(|e| e.to_string())?;
    let mut prev = 0.0;
    for i in 0..=20 {
        let p = 10f64.powf(-3.0 + i as f64 / 10.0);
        let fer = bounds::fer_bound(&base.with_p(p)).map_err(|e| e.to_string())?;
        let fe = bounds::fer_error_bound(&base.with_p(p)).map_err(|e| e.to_string())?;
        if fer.value < prev || fe.value > fer.value {
            return Err(format!("p={p}: FER {} FER_e {}", fer.value, fe.value));
        }
        prev = fer.value;
    }
    Ok(())
}

/// Runs every check.
pub fn run_all() -> Vec<Check> {
    vec![
        check("field axioms", field_axioms),
        check("G H^T = 0", duality),
        check("independent rows decode", theorem_one),
        check("(204,188) l=16 with 15 errors", flagship_roundtrip),
        check("cyclic dummy row", cyclic_dummy),
        check("dependent rows never succeed", dependent_rows_never_succeed),
        check("incremental equals full", incremental_agrees),
        check("bounds monotone and ordered", bounds_sane),
    ]
}
