//! Resolution numerical data: the (N_i, nu_i) and per-stratum character
//! counts that feed the explicit zeta formula. The artifact never computes
//! these from geometry; they are user-supplied input with hard validation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One irreducible component with its numerical data: `N` the multiplicity
/// of `f o h` along it, `nu - 1` the multiplicity of the pullback volume
/// form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: u32,
    #[serde(rename = "N")]
    pub n_mult: u32,
    pub nu: u32,
    /// Whether the component meets the fiber over the origin; drives the
    /// resolution-route lct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meets_origin: Option<bool>,
}

/// Character count, either an absolute integer or affine in p (`a*p + b`),
/// so one data file serves every prime in the good-reduction regime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCount {
    pub order: u64,
    pub index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<Affine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl CharCount {
    pub fn eval(&self, p: u64) -> BigInt {
        match (&self.value, &self.affine) {
            (Some(v), _) => BigInt::from(*v),
            (None, Some(aff)) => BigInt::from(aff.a) * BigInt::from(p) + BigInt::from(aff.b),
            (None, None) => BigInt::from(0),
        }
    }

    /// True when the count is the zero function of p.
    pub fn is_identically_zero(&self) -> bool {
        match (&self.value, &self.affine) {
            (Some(v), _) => *v == 0,
            (None, Some(aff)) => aff.a == 0 && aff.b == 0,
            (None, None) => true,
        }
    }
}

/// A stratum `E_I` with its per-character counts `c_{I,Phi,chi}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "I")]
    pub ids: Vec<u32>,
    pub counts: Vec<CharCount>,
}

impl Stratum {
    pub fn count_for(&self, order: u64, index: u64) -> Option<&CharCount> {
        self.counts
            .iter()
            .find(|c| c.order == order && c.index == index)
    }
}

/// The full numerical-data document for one residual function Phi.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub n: u32,
    pub components: Vec<Component>,
    pub strata: Vec<Stratum>,
    pub phi_label: String,
    pub good_reduction_regime: bool,
}

impl ResolutionData {
    pub fn from_json(text: &str) -> Result<ResolutionData> {
        let data: ResolutionData =
            serde_json::from_str(text).map_err(|e| Error::ResolutionData(e.to_string()))?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn component(&self, id: u32) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ResolutionData("ambient dimension n must be >= 1".into()));
        }
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if c.n_mult < 1 || c.nu < 1 {
                return Err(Error::ResolutionData(format!(
                    "component {}: N and nu must be >= 1 (got N={}, nu={})",
                    c.id, c.n_mult, c.nu
                )));
            }
            if !ids.insert(c.id) {
                return Err(Error::ResolutionData(format!(
                    "duplicate component id {}",
                    c.id
                )));
            }
        }
        let mut seen_subsets = BTreeSet::new();
        for (si, s) in self.strata.iter().enumerate() {
            let subset: BTreeSet<u32> = s.ids.iter().copied().collect();
            if subset.len() != s.ids.len() {
                return Err(Error::ResolutionData(format!(
                    "stratum #{si}: repeated component id"
                )));
            }
            if !seen_subsets.insert(subset.clone()) {
                return Err(Error::ResolutionData(format!(
                    "stratum #{si}: duplicate subset I"
                )));
            }
            for id in &s.ids {
                if !ids.contains(id) {
                    return Err(Error::ResolutionData(format!(
                        "stratum #{si}: unknown component id {id}"
                    )));
                }
            }
            let has_nonzero = s.counts.iter().any(|c| !c.is_identically_zero());
            if has_nonzero && s.ids.len() > self.n as usize {
                return Err(Error::ResolutionData(format!(
                    "stratum #{si}: #I = {} exceeds ambient dimension n = {} with nonzero count \
                     (normal crossings violated)",
                    s.ids.len(),
                    self.n
                )));
            }
            for cnt in &s.counts {
                if cnt.value.is_some() && cnt.affine.is_some() {
                    return Err(Error::ResolutionData(format!(
                        "stratum #{si}: count for ({}, {}) sets both value and affine",
                        cnt.order, cnt.index
                    )));
                }
                if cnt.order == 0 || cnt.index >= cnt.order {
                    return Err(Error::ResolutionData(format!(
                        "stratum #{si}: bad character label ({}, {})",
                        cnt.order, cnt.index
                    )));
                }
                if cnt.order > 1 && gcd(cnt.index, cnt.order) != 1 {
                    return Err(Error::ResolutionData(format!(
                        "stratum #{si}: character label ({}, {}) is not of exact order {}",
                        cnt.order, cnt.index, cnt.order
                    )));
                }
                // d must divide every N_i on the stratum, or the count is 0.
                if cnt.order > 1 && !cnt.is_identically_zero() {
                    for id in &s.ids {
                        let comp = self.component(*id).expect("checked above");
                        if comp.n_mult as u64 % cnt.order != 0 {
                            return Err(Error::ResolutionData(format!(
                                "stratum #{si}: order-{} count must vanish because {} does not \
                                 divide N_{} = {}",
                                cnt.order, cnt.order, id, comp.n_mult
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The nontrivial exact orders a reconstruction at p needs data for:
    /// divisors d > 1 of some N_i with i on a nonempty stratum.
    pub fn required_orders(&self) -> Vec<u64> {
        let mut orders = BTreeSet::new();
        for s in &self.strata {
            for id in &s.ids {
                if let Some(c) = self.component(*id) {
                    let nm = c.n_mult as u64;
                    for d in 2..=nm {
                        if nm % d == 0 {
                            orders.insert(d);
                        }
                    }
                }
            }
        }
        orders.into_iter().collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResolutionData {
        ResolutionData {
            n: 1,
            components: vec![Component {
                id: 1,
                n_mult: 2,
                nu: 1,
                meets_origin: Some(true),
            }],
            strata: vec![
                Stratum {
                    ids: vec![],
                    counts: vec![
                        CharCount {
                            order: 1,
                            index: 0,
                            value: None,
                            affine: Some(Affine { a: 1, b: -1 }),
                        },
                        CharCount {
                            order: 2,
                            index: 1,
                            value: None,
                            affine: Some(Affine { a: 1, b: -1 }),
                        },
                    ],
                },
                Stratum {
                    ids: vec![1],
                    counts: vec![
                        CharCount {
                            order: 1,
                            index: 0,
                            value: Some(1),
                            affine: None,
                        },
                        CharCount {
                            order: 2,
                            index: 1,
                            value: Some(1),
                            affine: None,
                        },
                    ],
                },
            ],
            phi_label: "full box".into(),
            good_reduction_regime: true,
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let data = sample();
        let json = data.to_json();
        let back = ResolutionData::from_json(&json).unwrap();
        assert_eq!(back, data);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn divisibility_invariant_enforced() {
        let mut data = sample();
        // Order 3 does not divide N = 2, nonzero count must be rejected.
        data.strata[1].counts.push(CharCount {
            order: 3,
            index: 1,
            value: Some(1),
            affine: None,
        });
        assert!(matches!(data.validate(), Err(Error::ResolutionData(_))));
        // A zero count for the same label is fine.
        data.strata[1].counts.last_mut().unwrap().value = Some(0);
        assert!(data.validate().is_ok());
    }

    #[test]
    fn required_orders_from_multiplicities() {
        assert_eq!(sample().required_orders(), vec![2]);
    }

    #[test]
    fn affine_counts_evaluate() {
        let data = sample();
        assert_eq!(
            data.strata[0].count_for(1, 0).unwrap().eval(7),
            BigInt::from(6)
        );
    }
}
