//! Shared JSON report shapes.
//!
//! Complex numbers serialize as `[re, im]` pairs everywhere; no string
//! parsing of "a+bi" anywhere in the wire formats.

use serde::{Deserialize, Serialize};

use crate::linalg::Cx;

/// One residual check: `{identity, residual, scale, pass}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub identity: String,
    pub residual: f64,
    pub scale: f64,
    pub pass: bool,
}

impl ResidualCheck {
    pub fn new(identity: impl Into<String>, residual: f64, scale: f64, tol: f64, floor: f64) -> Self {
        ResidualCheck {
            identity: identity.into(),
            residual,
            scale,
            pass: residual <= tol * scale + floor,
        }
    }
}

/// `[re, im]` pair for serialization.
pub fn cx_pair(z: Cx) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pair_cx(p: [f64; 2]) -> Cx {
    Cx::new(p[0], p[1])
}

/// serde adapter for fields of type `Cx`.
pub mod cx_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Cx, s: S) -> Result<S::Ok, S::Error> {
        cx_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Cx, D::Error> {
        let p = <[f64; 2]>::deserialize(d)?;
        Ok(pair_cx(p))
    }
}

/// serde adapter for `Vec<Cx>` fields.
pub mod cx_vec_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Cx], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|&z| cx_pair(z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Cx>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(pair_cx).collect())
    }
}
