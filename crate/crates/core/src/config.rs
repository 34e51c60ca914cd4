//! Engine configuration: the handful of geometric constants that are inputs
//! rather than theorems.
//!
//! Flat `key = value` text format; unknown keys are rejected.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Fujiki constant of the fourfold: integrals of fourth powers of
    /// degree-2 classes are `fujiki_constant * q(a)^2`.
    pub fujiki_constant: Scalar,
    /// Beauville-Bogomolov square of the Plücker polarization.
    pub q_g: Scalar,
    /// Second Betti number of the fourfold.
    pub b2_f: u32,
    /// Rank of the transcendental part of a very general polarized K3.
    pub transcendental_rank_k3: u32,
    /// Self-intersection of the K3 polarization (`2g - 2` in genus `g`).
    pub polarization_degree_d: u32,
    /// Degree of the cubic fourfold: the integral of `h^4`.
    pub cubic_h4: Scalar,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            fujiki_constant: Scalar::from_int(3),
            q_g: Scalar::from_int(6),
            b2_f: 23,
            transcendental_rank_k3: 21,
            polarization_degree_d: 4,
            cubic_h4: Scalar::from_int(3),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`, got `{1}`")]
    Malformed(usize, String),
    #[error("line {0}: unknown key `{1}`")]
    UnknownKey(usize, String),
    #[error("line {0}: invalid value `{2}` for `{1}`")]
    InvalidValue(usize, String, String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
}

impl EngineConfig {
    /// Parses the flat `key = value` format. Missing keys keep their
    /// defaults; unknown keys fail closed.
    pub fn parse(text: &str) -> Result<EngineConfig, ConfigError> {
        let mut cfg = EngineConfig::default();
        let mut seen: BTreeMap<String, ()> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let n = lineno + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Malformed(n, line.to_string()))?;
            let key = key.trim();
            let value = value.trim();
            if seen.insert(key.to_string(), ()).is_some() {
                return Err(ConfigError::DuplicateKey(key.to_string()));
            }
            let scalar = || {
                Scalar::parse(value).ok_or_else(|| {
                    ConfigError::InvalidValue(n, key.to_string(), value.to_string())
                })
            };
            let uint = || {
                value.parse::<u32>().map_err(|_| {
                    ConfigError::InvalidValue(n, key.to_string(), value.to_string())
                })
            };
            match key {
                "fujiki_constant" => cfg.fujiki_constant = scalar()?,
                "q_g" => cfg.q_g = scalar()?,
                "b2_F" => cfg.b2_f = uint()?,
                "transcendental_rank_K3" => cfg.transcendental_rank_k3 = uint()?,
                "polarization_degree_d" => cfg.polarization_degree_d = uint()?,
                "cubic_h4" => cfg.cubic_h4 = scalar()?,
                _ => return Err(ConfigError::UnknownKey(n, key.to_string())),
            }
        }
        Ok(cfg)
    }

    pub fn render(&self) -> String {
        format!(
            "fujiki_constant = {}\nq_g = {}\nb2_F = {}\ntranscendental_rank_K3 = {}\npolarization_degree_d = {}\ncubic_h4 = {}\n",
            self.fujiki_constant,
            self.q_g,
            self.b2_f,
            self.transcendental_rank_k3,
            self.polarization_degree_d,
            self.cubic_h4
        )
    }
}

/// Polarization degree of a genus-`g` K3 surface (`2g - 2`), for the genera
/// with available projective models.
pub fn genus_to_degree(genus: u32) -> Option<u32> {
    match genus {
        2..=10 | 12 => Some(2 * genus - 2),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = EngineConfig::default();
        let parsed = EngineConfig::parse(&cfg.render()).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn unknown_keys_fail_closed() {
        assert!(matches!(
            EngineConfig::parse("fujiki = 3"),
            Err(ConfigError::UnknownKey(1, _))
        ));
    }

    #[test]
    fn partial_override() {
        let cfg = EngineConfig::parse("polarization_degree_d = 2\n# comment\n").unwrap();
        assert_eq!(cfg.polarization_degree_d, 2);
        assert_eq!(cfg.q_g, Scalar::from_int(6));
    }

    #[test]
    fn genus_table() {
        assert_eq!(genus_to_degree(3), Some(4));
        assert_eq!(genus_to_degree(2), Some(2));
        assert_eq!(genus_to_degree(12), Some(22));
        assert_eq!(genus_to_degree(11), None);
    }
}
