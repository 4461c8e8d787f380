//! JSON formats shared by the command-line tool and the C bindings.
//!
//! * orbital files: `{"L": 8, "N": 2, "orbitals": [[[re, im], ...], ...]}`
//! * amplitude dumps: one `{"occ": "0110", "re": 0.5, "im": 0.0}` per line
//! * MPS dumps: boundaries and the two matrices of every site

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mps::{Mps, Occupation};
use crate::orbitals::OrbitalSet;
use crate::tensor::{ComplexMatrix, ComplexVector, C64};

type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn unpair(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Serialize, Deserialize)]
struct OrbitalFile {
    #[serde(rename = "L")]
    n_sites: usize,
    #[serde(rename = "N")]
    n_orbitals: usize,
    orbitals: Vec<Vec<Pair>>,
}

pub fn orbitals_to_json(set: &OrbitalSet) -> String {
    let file = OrbitalFile {
        n_sites: set.n_sites(),
        n_orbitals: set.n_orbitals(),
        orbitals: (0..set.n_orbitals()).map(|a| set.orbital(a).iter().copied().map(pair).collect()).collect(),
    };
    serde_json::to_string(&file).expect("orbital file serializes")
}

/// Parses an orbital file and checks its declared sizes. Orthonormality is
/// left to the caller.
pub fn orbitals_from_json(text: &str) -> Result<OrbitalSet> {
    let file: OrbitalFile =
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("invalid orbital file: {e}")))?;
    if file.orbitals.len() != file.n_orbitals {
        return Err(Error::Shape(format!(
            "orbital file declares N = {} but has {} rows",
            file.n_orbitals,
            file.orbitals.len()
        )));
    }
    if let Some((a, row)) = file.orbitals.iter().enumerate().find(|(_, r)| r.len() != file.n_sites) {
        return Err(Error::Shape(format!(
            "orbital {} has {} entries, expected L = {}",
            a + 1,
            row.len(),
            file.n_sites
        )));
    }
    let data = file.orbitals.into_iter().flatten().map(unpair).collect();
    OrbitalSet::from_matrix(ComplexMatrix::new(file.n_orbitals, file.n_sites, data)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub occ: String,
    pub re: f64,
    pub im: f64,
}

impl AmplitudeRecord {
    pub fn new(occ: &Occupation, value: C64) -> Self {
        Self { occ: occ.to_string(), re: value.re, im: value.im }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

pub fn write_amplitudes<'a>(
    mut out: impl Write,
    records: impl IntoIterator<Item = &'a AmplitudeRecord>,
) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads JSON lines, skipping blank ones.
pub fn read_amplitudes(input: impl BufRead) -> Result<Vec<AmplitudeRecord>> {
    let mut records = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Argument(format!("cannot read amplitudes: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: AmplitudeRecord =
            serde_json::from_str(&line).map_err(|e| Error::Argument(format!("amplitude line {}: {e}", k + 1)))?;
        records.push(record);
    }
    Ok(records)
}

/// Records for every nonzero entry of a dense state, in index order.
pub fn state_to_records(state: &ComplexVector, n_sites: usize) -> Vec<AmplitudeRecord> {
    state
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != C64::new(0.0, 0.0))
        .map(|(idx, &z)| AmplitudeRecord::new(&Occupation::from_index(idx, n_sites), z))
        .collect()
}

/// Dense state from records; `n_sites` comes from the occupation strings.
/// Repeated configurations are summed.
pub fn records_to_state(records: &[AmplitudeRecord]) -> Result<(ComplexVector, usize)> {
    let first = records.first().ok_or_else(|| Error::Argument("no amplitudes given".into()))?;
    let n_sites = first.occ.len();
    crate::check_dense_cap(n_sites, crate::DENSE_MAX_L, "amplitude file")?;
    let mut state = ComplexVector::zeros(1 << n_sites);
    for r in records {
        let occ: Occupation = r.occ.parse()?;
        if occ.len() != n_sites {
            return Err(Error::Shape(format!("configuration {} has length {}, expected {n_sites}", r.occ, occ.len())));
        }
        state.entries_mut()[occ.index()] += r.value();
    }
    Ok((state, n_sites))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MpsFile {
    #[serde(rename = "L")]
    pub n_sites: usize,
    pub bond_dim: usize,
    pub b0: Vec<Pair>,
    #[serde(rename = "bL")]
    pub b_l: Vec<Pair>,
    /// `sites[ℓ][s]` is the row-major matrix `A_s` of site `ℓ`.
    pub sites: Vec<[Vec<Vec<Pair>>; 2]>,
}

impl From<&Mps> for MpsFile {
    fn from(mps: &Mps) -> Self {
        let matrix = |m: &ComplexMatrix| (0..m.rows()).map(|i| m.row(i).iter().copied().map(pair).collect()).collect();
        Self {
            n_sites: mps.n_sites(),
            bond_dim: mps.bond_dim(),
            b0: mps.b0().entries().iter().copied().map(pair).collect(),
            b_l: mps.b_l().entries().iter().copied().map(pair).collect(),
            sites: mps.sites().iter().map(|s| [matrix(s.get(0)), matrix(s.get(1))]).collect(),
        }
    }
}

pub fn mps_to_json(mps: &Mps) -> String {
    serde_json::to_string(&MpsFile::from(mps)).expect("MPS serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpo::Statistics;
    use crate::mps::build_slater_mps;

    #[test]
    fn orbital_round_trip() {
        let set = OrbitalSet::random_orthonormal(5, 2, 9).unwrap();
        let back = orbitals_from_json(&orbitals_to_json(&set)).unwrap();
        assert_eq!(back.matrix(), set.matrix());
    }

    #[test]
    fn orbital_file_layout() {
        let json: serde_json::Value =
            serde_json::from_str(&orbitals_to_json(&OrbitalSet::localized(3, 1).unwrap())).unwrap();
        assert_eq!(json["L"], 3);
        assert_eq!(json["N"], 1);
        assert_eq!(json["orbitals"][0][0], serde_json::json!([1.0, 0.0]));
    }

    #[test]
    fn orbital_file_size_mismatch() {
        let bad = r#"{"L": 3, "N": 1, "orbitals": [[[1,0],[0,0]]]}"#;
        assert!(matches!(orbitals_from_json(bad), Err(Error::Shape(_))));
        let bad = r#"{"L": 2, "N": 2, "orbitals": [[[1,0],[0,0]]]}"#;
        assert!(matches!(orbitals_from_json(bad), Err(Error::Shape(_))));
        assert!(matches!(orbitals_from_json("{"), Err(Error::Argument(_))));
    }

    #[test]
    fn amplitude_round_trip() {
        let set = OrbitalSet::random_orthonormal(4, 2, 3).unwrap();
        let state = build_slater_mps(&set, Statistics::Fermion).unwrap().to_dense().unwrap();
        let records = state_to_records(&state, 4);
        let mut buf = Vec::new();
        write_amplitudes(&mut buf, &records).unwrap();
        let parsed = read_amplitudes(buf.as_slice()).unwrap();
        assert_eq!(parsed, records);
        let (back, l) = records_to_state(&parsed).unwrap();
        assert_eq!(l, 4);
        assert_eq!(back, state);
    }

    #[test]
    fn mps_file_shapes() {
        let set = OrbitalSet::random_orthonormal(3, 2, 1).unwrap();
        let file = MpsFile::from(&build_slater_mps(&set, Statistics::Fermion).unwrap());
        assert_eq!(file.n_sites, 3);
        assert_eq!(file.bond_dim, 4);
        assert_eq!(file.sites[0][1].len(), 4);
    }
}
