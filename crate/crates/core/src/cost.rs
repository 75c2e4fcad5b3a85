//! Per-rule cost constants.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::lattice::ExtNat;

macro_rules! cost_model {
    ($($field:ident = $default:expr),* $(,)?) => {
        /// One lattice element per charged rule. Field names double as the
        /// keys of the cost-model file format.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
        pub struct CostModel {
            $(pub $field: ExtNat,)*
        }

        impl Default for CostModel {
            fn default() -> Self {
                CostModel { $($field: ExtNat::Fin($default),)* }
            }
        }

        impl CostModel {
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            pub fn get(&self, key: &str) -> Option<ExtNat> {
                match key {
                    $(stringify!($field) => Some(self.$field),)*
                    _ => None,
                }
            }

            pub fn set(&mut self, key: &str, value: ExtNat) -> Result<(), CostModelError> {
                match key {
                    $(stringify!($field) => { self.$field = value; Ok(()) })*
                    _ => Err(CostModelError::UnknownKey(key.to_string())),
                }
            }
        }
    };
}

cost_model! {
    delta_universe = 1,
    delta_el = 1,
    delta_pi = 1,
    delta_sigma = 1,
    delta_proj1 = 1,
    delta_proj2 = 1,
    delta_id = 1,
    delta_refl = 1,
    delta_j = 1,
    delta_jbeta = 1,
    delta_nat = 1,
    delta_zero = 1,
    delta_succ = 1,
    delta_natrec = 1,
    delta_vec = 1,
    delta_nil = 1,
    delta_cons = 1,
    delta_vecrec = 1,
    delta_fin = 1,
    delta_fzero = 1,
    delta_fsucc = 1,
    delta_box = 1,
    delta_unbox = 1,
    delta_app = 0,
    delta_beta = 0,
    delta_add = 2,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CostModelError {
    #[error("unknown cost key `{0}`")]
    UnknownKey(String),
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: {msg}")]
    Value { line: usize, msg: String },
    #[error("cannot read cost model: {0}")]
    Io(String),
}

impl CostModel {
    /// Apply `key = value` overrides, one per line; `#` starts a comment.
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), CostModelError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(CostModelError::Syntax { line: i + 1 })?;
            let value: ExtNat =
                value
                    .trim()
                    .parse()
                    .map_err(
                        |e: crate::lattice::ParseExtNatError| CostModelError::Value {
                            line: i + 1,
                            msg: e.to_string(),
                        },
                    )?;
            self.set(key.trim(), value)
                .map_err(|e| CostModelError::Value {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<CostModel, CostModelError> {
        let mut cm = CostModel::default();
        cm.apply_overrides(text)?;
        Ok(cm)
    }

    pub fn load(path: &Path) -> Result<CostModel, CostModelError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CostModelError::Io(format!("{}: {e}", path.display())))?;
        CostModel::parse(&text)
    }

    /// The same table with introduction forms free, so that a value re-checks
    /// at cost zero and can be compared against the term that produced it.
    pub fn value_reading(&self) -> CostModel {
        CostModel {
            delta_zero: ExtNat::ZERO,
            delta_succ: ExtNat::ZERO,
            delta_nil: ExtNat::ZERO,
            delta_cons: ExtNat::ZERO,
            delta_refl: ExtNat::ZERO,
            delta_fzero: ExtNat::ZERO,
            delta_fsucc: ExtNat::ZERO,
            ..*self
        }
    }

    /// Entries that differ from the default table.
    pub fn overrides(&self) -> BTreeMap<&'static str, ExtNat> {
        let base = CostModel::default();
        CostModel::KEYS
            .iter()
            .filter(|k| self.get(k) != base.get(k))
            .map(|k| (*k, self.get(k).unwrap_or_default()))
            .collect()
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for key in CostModel::KEYS {
            writeln!(f, "{key} = {}", self.get(key).unwrap_or_default())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_calibration() {
        let cm = CostModel::default();
        assert_eq!(cm.delta_zero, ExtNat::Fin(1));
        assert_eq!(cm.delta_add, ExtNat::Fin(2));
        assert_eq!(cm.delta_vecrec, ExtNat::Fin(1));
        assert_eq!(cm.delta_natrec, ExtNat::Fin(1));
        assert_eq!(cm.delta_app, ExtNat::Fin(0));
        assert_eq!(cm.delta_beta, ExtNat::Fin(0));
        assert_eq!(cm.delta_box, ExtNat::Fin(1));
        assert_eq!(CostModel::KEYS.len(), 26);
    }

    #[test]
    fn parse_overrides() {
        let cm = CostModel::parse("# tweak\ndelta_app = 3\n\ndelta_add=inf # expensive\n").unwrap();
        assert_eq!(cm.delta_app, ExtNat::Fin(3));
        assert_eq!(cm.delta_add, ExtNat::Inf);
        assert_eq!(cm.overrides().len(), 2);
        assert_eq!(CostModel::parse(&cm.to_string()).unwrap(), cm);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            CostModel::parse("delta_nope = 1"),
            Err(CostModelError::Value { line: 1, .. })
        ));
        assert!(matches!(
            CostModel::parse("delta_app 1"),
            Err(CostModelError::Syntax { line: 1 })
        ));
        assert!(matches!(
            CostModel::parse("delta_app = -1"),
            Err(CostModelError::Value { .. })
        ));
    }
}
