use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CuboidError, CuboidSystem};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactorId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    L1,
    L2,
    F7,
    F8,
}

impl FactorId {
    /// Catalog order.
    pub const ALL: [FactorId; 10] = [
        FactorId::F1,
        FactorId::F2,
        FactorId::F3,
        FactorId::F4,
        FactorId::F5,
        FactorId::F6,
        FactorId::L1,
        FactorId::L2,
        FactorId::F7,
        FactorId::F8,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FactorId::F1 => "first factor equation",
            FactorId::F2 => "second factor equation",
            FactorId::F3 => "third factor equation",
            FactorId::F4 => "fourth factor equation",
            FactorId::F5 => "fifth factor equation",
            FactorId::F6 => "sixth factor equation",
            FactorId::L1 => "combination of F5 and F6 free of E11^2",
            FactorId::L2 => "combination of F5 and F6 free of E10*E12",
            FactorId::F7 => "seventh factor equation",
            FactorId::F8 => "eighth factor equation",
        }
    }
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FactorId {
    type Err = CuboidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FactorId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CuboidError::UnknownId(s.to_string()))
    }
}

/// A polynomial relation among the elementary symbols and `L` that holds on
/// every cuboid.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorEquation {
    pub id: FactorId,
    pub lhs: Polynomial,
}

impl FactorEquation {
    pub fn display(&self, sys: &CuboidSystem) -> String {
        format!("{} = 0", sys.format(&self.lhs))
    }
}

/// Published forms, signs and term order as displayed in the source.
const TRANSCRIBED: [(FactorId, &str); 10] = [
    (FactorId::F1, "E10^2 - 2*E20 - L^2"),
    (FactorId::F2, "E01^2 - 2*E02 - 2*L^2"),
    (
        FactorId::F3,
        "2*E12 + 6*E30 - 2*E01*E11 + E10*E01^2 + 3*E10*L^2 - E10^3",
    ),
    (
        FactorId::F4,
        "2*E21 + 6*E03 - 2*E10*E11 + E01*E10^2 + 5*E01*L^2 - E01^3",
    ),
    (
        FactorId::F5,
        "8*E10*E12 - 8*E01*E21 - 8*E11^2 + 4*E01^2*E10^2 - E01^4 - 3*E10^4 \
         + 10*E10^2*L^2 + 4*E01^2*L^2 + L^4",
    ),
    (
        FactorId::F6,
        "-8*E10*E12 + 8*E01*E21 - 8*E11^2 + 4*E01^2*E10^2 - E10^4 - 3*E01^4 \
         + 20*E01^2*L^2 - 2*E10^2*L^2 - 5*L^4",
    ),
    (
        FactorId::L1,
        "8*E10*E12 - 8*E01*E21 + E01^4 - E10^4 - 8*E01^2*L^2 + 6*E10^2*L^2 + 3*L^4",
    ),
    (
        FactorId::L2,
        "4*E11^2 - 2*E01^2*E10^2 + E01^4 + E10^4 - 6*E01^2*L^2 - 2*E10^2*L^2 + L^4",
    ),
    (
        FactorId::F7,
        "4*E11*E21 - 2*E11*E01^3 + 6*E12*E01^2 + 2*E12*E10^2 - E10^3*E01^2 + E10*E01^4 \
         - 2*E12*L^2 - E10*E01^2*L^2 + 2*E10^3*L^2 - 2*E10*L^4",
    ),
    (
        FactorId::F8,
        "4*E11*E12 - 2*E11*E10^3 + 6*E21*E10^2 + 2*E21*E01^2 - E01^3*E10^2 + E01*E10^4 \
         + 2*E21*L^2 - 2*E11*E10*L^2 + 2*E01*E10^2*L^2 + E01^3*L^2 - 3*E01*L^4",
    ),
];

/// The published forms exactly as transcribed, before normalization.
pub fn transcribed(sys: &CuboidSystem) -> Vec<FactorEquation> {
    TRANSCRIBED
        .iter()
        .map(|(id, text)| FactorEquation {
            id: *id,
            lhs: sys.parse(text).expect("catalog text parses"),
        })
        .collect()
}

pub fn factor_catalog(sys: &CuboidSystem) -> Vec<FactorEquation> {
    transcribed(sys)
        .into_iter()
        .map(|f| FactorEquation {
            lhs: sys.normalize(&f.lhs),
            ..f
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: FactorId,
    pub label: String,
    pub lhs: String,
}

pub fn catalog_to_json(sys: &CuboidSystem, eqs: &[FactorEquation]) -> String {
    let entries: Vec<CatalogEntry> = eqs
        .iter()
        .map(|f| CatalogEntry {
            id: f.id,
            label: f.id.label().to_string(),
            lhs: sys.format(&f.lhs),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data serializes")
}

pub fn catalog_from_json(
    sys: &CuboidSystem,
    text: &str,
) -> Result<Vec<FactorEquation>, CuboidError> {
    let entries: Vec<CatalogEntry> =
        serde_json::from_str(text).map_err(|e| CuboidError::Catalog(e.to_string()))?;
    entries
        .into_iter()
        .map(|e| {
            Ok(FactorEquation {
                id: e.id,
                lhs: sys.parse(&e.lhs)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    fn sys() -> &'static CuboidSystem {
        CuboidSystem::shared()
    }

    fn coeff(f: &FactorEquation, vars: &[(&str, u32)]) -> Rational {
        f.lhs.coeff_of(vars).unwrap()
    }

    #[test]
    fn transcription_spot_checks() {
        let t = transcribed(sys());
        assert_eq!(coeff(&t[4], &[("E10", 2), ("L", 2)]), Rational::from(10));
        assert_eq!(coeff(&t[7], &[("E11", 2)]), Rational::from(4));
        assert_eq!(coeff(&t[7], &[("L", 4)]), Rational::from(1));
        assert_eq!(coeff(&t[9], &[("E01", 1), ("L", 4)]), Rational::from(-3));
    }

    #[test]
    fn normalized_catalog() {
        let c = factor_catalog(sys());
        assert_eq!(c.len(), 10);
        assert_eq!(c[0].display(sys()), "E10^2 - 2*E20 - L^2 = 0");
        for (f, t) in c.iter().zip(transcribed(sys())) {
            assert_eq!(f.id, t.id);
            assert!(f.lhs == t.lhs || f.lhs == -&t.lhs, "{}", f.id);
            assert!(f.lhs.terms().all(|(_, c)| c.is_integer()));
            let lead = f.lhs.leading_term(sys().display_order()).unwrap().1;
            assert!(!lead.is_negative());
        }
        // sign flips under the display order
        let flipped: Vec<FactorId> = c
            .iter()
            .zip(transcribed(sys()))
            .filter(|(f, t)| f.lhs != t.lhs)
            .map(|(f, _)| f.id)
            .collect();
        assert_eq!(
            flipped,
            [
                FactorId::F3,
                FactorId::F5,
                FactorId::F6,
                FactorId::L1,
                FactorId::F7
            ]
        );
        assert_eq!(coeff(&c[4], &[("E10", 2), ("L", 2)]), Rational::from(-10));
    }

    #[test]
    fn json_round_trip() {
        let c = factor_catalog(sys());
        let text = catalog_to_json(sys(), &c);
        assert_eq!(catalog_from_json(sys(), &text).unwrap(), c);
        assert!(catalog_from_json(sys(), "[{\"id\":\"F9\"}]").is_err());
    }

    #[test]
    fn ids_parse() {
        assert_eq!("f7".parse::<FactorId>().unwrap(), FactorId::F7);
        assert!("F9".parse::<FactorId>().is_err());
    }
}
