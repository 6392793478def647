//! Tensor file format: a JSON object `{schema: "kct-1", n, entries}` with
//! 1-based indices and one `[a, b, c, d, re, im]` record per component.
//! Only a generating set under the symmetry group is required; the loader
//! closes the listed entries under the full orbit, reports how many slots
//! it completed, and rejects files whose entries are mutually inconsistent.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{KahlerCurvatureTensor, C64};

pub const SCHEMA: &str = "kct-1";

/// Consistency tolerance applied when closing entries under the symmetry
/// orbit and when validating a fully-listed file.
pub const LOAD_TOL: f64 = 1e-8;

#[derive(Serialize, Deserialize)]
struct TensorFile {
    schema: String,
    n: usize,
    entries: Vec<(usize, usize, usize, usize, f64, f64)>,
}

#[derive(Debug)]
pub struct LoadedTensor {
    pub tensor: KahlerCurvatureTensor,
    /// Slots listed explicitly in the file.
    pub explicit_entries: usize,
    /// Slots filled by closing the explicit ones under the symmetry orbit.
    pub completed_entries: usize,
    /// Slots not reachable from any listed entry, defaulted to zero.
    pub defaulted_entries: usize,
}

impl LoadedTensor {
    pub fn was_completed(&self) -> bool {
        self.completed_entries > 0
    }
}

/// Serializes a validated tensor with its full entry list in lexicographic
/// index order; the float formatting round-trips bit for bit.
pub fn tensor_to_json(t: &KahlerCurvatureTensor) -> Result<String> {
    let violations = t.validate(LOAD_TOL);
    if !violations.is_empty() {
        return Err(Error::Symmetry(format!(
            "refusing to serialize a tensor with {} symmetry violations",
            violations.len()
        )));
    }
    let n = t.n();
    let mut entries = Vec::with_capacity(n * n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = t.entry(a, b, c, d);
                    entries.push((a + 1, b + 1, c + 1, d + 1, v.re, v.im));
                }
            }
        }
    }
    let file = TensorFile {
        schema: SCHEMA.to_string(),
        n,
        entries,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn save_tensor(path: &Path, t: &KahlerCurvatureTensor) -> Result<()> {
    std::fs::write(path, tensor_to_json(t)?)?;
    Ok(())
}

/// The symmetry orbit of one slot, with the conjugation flag telling how
/// the value transports there.
fn orbit(t: [usize; 4]) -> [([usize; 4], bool); 8] {
    let [a, b, c, d] = t;
    [
        ([a, b, c, d], false),
        ([c, b, a, d], false),
        ([a, d, c, b], false),
        ([c, d, a, b], false),
        ([b, a, d, c], true),
        ([b, c, d, a], true),
        ([d, a, b, c], true),
        ([d, c, b, a], true),
    ]
}

pub fn tensor_from_json(text: &str) -> Result<LoadedTensor> {
    let file: TensorFile = serde_json::from_str(text)
        .map_err(|e| Error::Load(format!("malformed tensor file: {e}")))?;
    if file.schema != SCHEMA {
        return Err(Error::Load(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            file.schema
        )));
    }
    let n = file.n;
    if n == 0 {
        return Err(Error::Load("tensor dimension must be at least 1".into()));
    }
    let total = n * n * n * n;
    let idx = |t: [usize; 4]| ((t[0] * n + t[1]) * n + t[2]) * n + t[3];

    let mut slots: Vec<Option<C64>> = vec![None; total];
    let mut explicit: Vec<bool> = vec![false; total];

    // First pass: place explicit records, checking duplicate consistency.
    let mut records = Vec::with_capacity(file.entries.len());
    for (k, &(a, b, c, d, re, im)) in file.entries.iter().enumerate() {
        let tup = [a, b, c, d];
        if tup.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::Load(format!(
                "entry {k}: index {tup:?} out of range for n = {n} (indices are 1-based)"
            )));
        }
        let tup = [a - 1, b - 1, c - 1, d - 1];
        let v = C64::new(re, im);
        let slot = idx(tup);
        match slots[slot] {
            Some(existing) if (existing - v).norm() > LOAD_TOL => {
                return Err(Error::Load(format!(
                    "entry {k}: duplicate listing for {:?} disagrees: {existing} vs {v}",
                    [a, b, c, d]
                )));
            }
            Some(_) => {}
            None => {
                slots[slot] = Some(v);
                explicit[slot] = true;
            }
        }
        records.push((tup, v));
    }
    let explicit_entries = explicit.iter().filter(|&&e| e).count();

    // Second pass: close under the symmetry orbit.
    let mut conflicts: Vec<String> = Vec::new();
    for &(tup, v) in &records {
        for (img, conj) in orbit(tup) {
            let value = if conj { v.conj() } else { v };
            let slot = idx(img);
            match slots[slot] {
                None => slots[slot] = Some(value),
                Some(existing) => {
                    if (existing - value).norm() > LOAD_TOL {
                        conflicts.push(format!(
                            "{:?} -> {:?}: {existing} vs {value}",
                            tup.map(|i| i + 1),
                            img.map(|i| i + 1)
                        ));
                    }
                }
            }
        }
    }
    if !conflicts.is_empty() {
        conflicts.truncate(5);
        return Err(Error::Load(format!(
            "entries are inconsistent under the symmetry group: {}",
            conflicts.join("; ")
        )));
    }

    let mut defaulted = 0usize;
    let mut completed = 0usize;
    let entries: Vec<C64> = slots
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Some(v) => {
                if !explicit[i] {
                    completed += 1;
                }
                *v
            }
            None => {
                defaulted += 1;
                C64::new(0.0, 0.0)
            }
        })
        .collect();

    let tensor = KahlerCurvatureTensor::from_entries_checked(n, entries, LOAD_TOL)
        .map_err(|e| Error::Load(format!("loaded entries fail validation: {e}")))?;
    Ok(LoadedTensor {
        tensor,
        explicit_entries,
        completed_entries: completed,
        defaulted_entries: defaulted,
    })
}

pub fn load_tensor(path: &Path) -> Result<LoadedTensor> {
    let text = std::fs::read_to_string(path)?;
    tensor_from_json(&text)
}
