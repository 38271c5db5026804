//! Generators for the seven highly symmetric qubit constellations and
//! channel file I/O.
//!
//! Each generator places the named polyhedron's vertices on the unit sphere in
//! standard coordinates. Guesswork is invariant under a global rotation of the
//! constellation, so the orientation is free; standard coordinates keep the
//! fixtures readable.
//!
//! The channel file format is JSON:
//!
//! ```json
//! {
//!   "name": "octahedron",            // optional
//!   "labels": ["s00", "s01", ...],
//!   "bloch": [[1.0, 0.0, 0.0], ...],
//!   "prior": [0.25, 0.25, ...]       // optional, defaults to uniform
//! }
//! ```

use crate::model::{validate_channel, BlochVector, ModelError, Prior, QubitCqChannel};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("cannot read channel file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse channel file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid channel: {0}")]
    Validation(#[from] ModelError),
    #[error("unknown channel family `{0}`")]
    UnknownFamily(String),
}

/// The seven vertex-transitive constellations with an informationally
/// complete Bloch image: the five Platonic solids plus the cuboctahedron and
/// the icosidodecahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HsicFamily {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
    Cuboctahedron,
    Icosidodecahedron,
}

impl HsicFamily {
    pub const ALL: [HsicFamily; 7] = [
        HsicFamily::Tetrahedron,
        HsicFamily::Octahedron,
        HsicFamily::Cube,
        HsicFamily::Icosahedron,
        HsicFamily::Dodecahedron,
        HsicFamily::Cuboctahedron,
        HsicFamily::Icosidodecahedron,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HsicFamily::Tetrahedron => "tetrahedron",
            HsicFamily::Octahedron => "octahedron",
            HsicFamily::Cube => "cube",
            HsicFamily::Icosahedron => "icosahedron",
            HsicFamily::Dodecahedron => "dodecahedron",
            HsicFamily::Cuboctahedron => "cuboctahedron",
            HsicFamily::Icosidodecahedron => "icosidodecahedron",
        }
    }

    /// Number of vertices, `|M|`.
    pub fn size(&self) -> usize {
        match self {
            HsicFamily::Tetrahedron => 4,
            HsicFamily::Octahedron => 6,
            HsicFamily::Cube => 8,
            HsicFamily::Icosahedron => 12,
            HsicFamily::Dodecahedron => 20,
            HsicFamily::Cuboctahedron => 12,
            HsicFamily::Icosidodecahedron => 30,
        }
    }
}

impl fmt::Display for HsicFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HsicFamily {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, ChannelError> {
        HsicFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ChannelError::UnknownFamily(s.to_string()))
    }
}

const PHI: f64 = 1.618033988749894848204586834365638118_f64;

fn sign_pairs(base: &[[f64; 3]], out: &mut Vec<BlochVector>) {
    // All sign combinations on the nonzero coordinates of each base vector.
    for b in base {
        let free: Vec<usize> = (0..3).filter(|&i| b[i] != 0.0).collect();
        for mask in 0..(1u32 << free.len()) {
            let mut v = *b;
            for (bit, &i) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[i] = -v[i];
                }
            }
            out.push(BlochVector::new(v[0], v[1], v[2]));
        }
    }
}

fn cyclic(base: [f64; 3]) -> [[f64; 3]; 3] {
    [base, [base[2], base[0], base[1]], [base[1], base[2], base[0]]]
}

fn normalize_all(mut vs: Vec<BlochVector>) -> Vec<BlochVector> {
    for v in &mut vs {
        let n = v.norm();
        *v = *v * (1.0 / n);
    }
    vs
}

fn vertices(family: HsicFamily) -> Vec<BlochVector> {
    match family {
        HsicFamily::Tetrahedron => {
            let s = 1.0 / 3f64.sqrt();
            vec![
                BlochVector::new(s, s, s),
                BlochVector::new(s, -s, -s),
                BlochVector::new(-s, s, -s),
                BlochVector::new(-s, -s, s),
            ]
        }
        HsicFamily::Octahedron => {
            let mut out = Vec::new();
            sign_pairs(&cyclic([1.0, 0.0, 0.0]), &mut out);
            out
        }
        HsicFamily::Cube => {
            let mut out = Vec::new();
            sign_pairs(&[[1.0, 1.0, 1.0]], &mut out);
            normalize_all(out)
        }
        HsicFamily::Icosahedron => {
            let mut out = Vec::new();
            sign_pairs(&cyclic([0.0, 1.0, PHI]), &mut out);
            normalize_all(out)
        }
        HsicFamily::Dodecahedron => {
            let mut out = Vec::new();
            sign_pairs(&[[1.0, 1.0, 1.0]], &mut out);
            sign_pairs(&cyclic([0.0, 1.0 / PHI, PHI]), &mut out);
            normalize_all(out)
        }
        HsicFamily::Cuboctahedron => {
            let mut out = Vec::new();
            sign_pairs(&cyclic([1.0, 1.0, 0.0]), &mut out);
            normalize_all(out)
        }
        HsicFamily::Icosidodecahedron => {
            // Edge midpoints of the icosahedron, normalized: the 6 axis
            // vertices plus cyclic permutations of (1/2, φ/2, φ²/2)·(1/φ).
            let mut out = Vec::new();
            sign_pairs(&cyclic([1.0, 0.0, 0.0]), &mut out);
            sign_pairs(&cyclic([0.5, PHI / 2.0, PHI * PHI / 2.0]), &mut out);
            normalize_all(out)
        }
    }
}

/// The channel whose states are the unit-norm vertices of the named
/// polyhedron, labeled `s00`, `s01`, ... in generation order.
pub fn generate_hsic(family: HsicFamily) -> QubitCqChannel {
    let bloch = vertices(family);
    let labels = (0..bloch.len()).map(|i| format!("s{i:02}")).collect();
    validate_channel(labels, bloch).expect("generated constellations are valid")
}

/// Serialized form of a channel file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub bloch: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<f64>>,
}

impl ChannelFile {
    pub fn from_channel(channel: &QubitCqChannel, name: Option<&str>) -> Self {
        ChannelFile {
            name: name.map(|s| s.to_string()),
            labels: channel.labels().to_vec(),
            bloch: channel.bloch().iter().map(|r| [r.x, r.y, r.z]).collect(),
            prior: None,
        }
    }

    pub fn channel(&self) -> Result<QubitCqChannel, ModelError> {
        validate_channel(
            self.labels.clone(),
            self.bloch.iter().map(|&[x, y, z]| BlochVector::new(x, y, z)).collect(),
        )
    }

    /// The file's prior, defaulting to uniform.
    pub fn prior(&self) -> Result<Prior, ModelError> {
        match &self.prior {
            Some(p) => {
                if p.len() != self.labels.len() {
                    return Err(ModelError::InvalidPrior(format!(
                        "{} prior weights for {} labels",
                        p.len(),
                        self.labels.len()
                    )));
                }
                Prior::new(p.clone())
            }
            None => Ok(Prior::uniform(self.labels.len())),
        }
    }
}

/// Parse and validate a channel file.
pub fn load_channel_file(path: impl AsRef<Path>) -> Result<ChannelFile, ChannelError> {
    let text = std::fs::read_to_string(path)?;
    let file: ChannelFile = serde_json::from_str(&text)?;
    file.channel()?; // validate eagerly
    Ok(file)
}

/// Load just the channel from a file.
pub fn load_channel(path: impl AsRef<Path>) -> Result<QubitCqChannel, ChannelError> {
    Ok(load_channel_file(path)?.channel()?)
}

/// Write a channel to a file in the JSON schema above. Numbers are printed
/// with enough digits to round-trip bit-exactly.
pub fn save_channel(
    channel: &QubitCqChannel,
    name: Option<&str>,
    path: impl AsRef<Path>,
) -> Result<(), ChannelError> {
    let file = ChannelFile::from_channel(channel, name);
    let text = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts_match_the_solids() {
        let counts: Vec<usize> = HsicFamily::ALL.iter().map(|f| f.size()).collect();
        assert_eq!(counts, vec![4, 6, 8, 12, 20, 12, 30]);
        for family in HsicFamily::ALL {
            let ch = generate_hsic(family);
            assert_eq!(ch.len(), family.size(), "{family}");
        }
    }

    #[test]
    fn all_vertices_are_unit() {
        for family in HsicFamily::ALL {
            let ch = generate_hsic(family);
            for (label, r) in ch.labels().iter().zip(ch.bloch()) {
                assert!(
                    (r.norm() - 1.0).abs() <= 1e-12,
                    "{family} {label} has norm {}",
                    r.norm()
                );
            }
        }
    }

    #[test]
    fn vertices_are_distinct() {
        for family in HsicFamily::ALL {
            let ch = generate_hsic(family);
            for i in 0..ch.len() {
                for j in 0..i {
                    assert!(
                        !ch.bloch()[i].approx_eq(&ch.bloch()[j], 1e-9),
                        "{family}: vertices {i} and {j} coincide"
                    );
                }
            }
        }
    }

    #[test]
    fn tetrahedron_pairwise_dots() {
        let ch = generate_hsic(HsicFamily::Tetrahedron);
        for i in 0..4 {
            for j in 0..i {
                let d = ch.bloch()[i].dot(&ch.bloch()[j]);
                assert!((d + 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn octahedron_pairwise_dots() {
        let ch = generate_hsic(HsicFamily::Octahedron);
        for i in 0..6 {
            for j in 0..i {
                let d = ch.bloch()[i].dot(&ch.bloch()[j]);
                assert!(d.abs() < 1e-12 || (d + 1.0).abs() < 1e-12, "dot {d}");
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in HsicFamily::ALL {
            assert_eq!(family.name().parse::<HsicFamily>().unwrap(), family);
        }
        assert!("hexagon".parse::<HsicFamily>().is_err());
    }

    #[test]
    fn save_load_round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join("guesswork-channel-roundtrip");
        std::fs::create_dir_all(&dir).unwrap();
        for family in HsicFamily::ALL {
            let ch = generate_hsic(family);
            let path = dir.join(format!("{family}.json"));
            save_channel(&ch, Some(family.name()), &path).unwrap();
            let loaded = load_channel(&path).unwrap();
            assert_eq!(loaded, ch, "{family}");
        }
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        let dir = std::env::temp_dir().join("guesswork-channel-bad");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.json");
        std::fs::write(&path, "{\"labels\": [\"a\",").unwrap();
        assert!(matches!(load_channel(&path), Err(ChannelError::Parse(_))));
    }

    #[test]
    fn oversized_vector_is_a_validation_error() {
        let dir = std::env::temp_dir().join("guesswork-channel-bad");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("oversized.json");
        std::fs::write(
            &path,
            r#"{"labels": ["a", "b"], "bloch": [[0.0, 0.0, 1.5], [0.0, 0.0, -1.0]]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_channel(&path),
            Err(ChannelError::Validation(ModelError::BlochNormExceeded { .. }))
        ));
    }

    #[test]
    fn prior_defaults_to_uniform_and_validates_length() {
        let file: ChannelFile = serde_json::from_str(
            r#"{"labels": ["a", "b"], "bloch": [[0, 0, 1], [0, 0, -1]]}"#,
        )
        .unwrap();
        assert_eq!(file.prior().unwrap().weights(), &[0.5, 0.5]);
        let file: ChannelFile = serde_json::from_str(
            r#"{"labels": ["a", "b"], "bloch": [[0, 0, 1], [0, 0, -1]], "prior": [1.0]}"#,
        )
        .unwrap();
        assert!(file.prior().is_err());
    }
}
