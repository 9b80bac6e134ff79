//! Elementary divisors of a characteristic polynomial and the checks on
//! them: every set `M_j = {m : ν(m) ≥ j}` is expected to satisfy
//! condition (I), and Saito's conjecture expects eigenvalues of order
//! `d_w` or `d_w/2` (of order `d_w` when all weights are below 1/2).

use crate::cyclo_algebra::Divisor;
use crate::error::{Error, Result};
use crate::orlik_graph::build_graph;
use crate::weight_systems::{check_conditions, divisor_d, WeightSystem};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Three-valued outcome of a conjecture check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// The nested sets `M_1 ⊇ M_2 ⊇ … ⊇ M_{ν_max}`, each descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryDecomposition {
    pub sets: Vec<Vec<u64>>,
}

impl ElementaryDecomposition {
    pub fn nu_max(&self) -> usize {
        self.sets.len()
    }

    /// `Σ_j Σ_{m ∈ M_j} Ψ_m`.
    pub fn reconstruct(&self) -> Divisor {
        let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
        for set in &self.sets {
            for &m in set {
                *counts.entry(m).or_default() += 1;
            }
        }
        Divisor::from_psi(
            counts
                .into_iter()
                .map(|(m, c)| (m, BigRational::from_integer(c.into()))),
        )
    }

    /// Runs of equal consecutive sets as `(first j, last j, set)`, 1-based.
    pub fn distinct(&self) -> Vec<(usize, usize, &[u64])> {
        let mut out: Vec<(usize, usize, &[u64])> = Vec::new();
        for (i, set) in self.sets.iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.2 == set.as_slice() => last.1 = i + 1,
                _ => out.push((i + 1, i + 1, set)),
            }
        }
        out
    }
}

/// Splits a divisor with nonnegative integer multiplicities into its
/// elementary-divisor sets.
pub fn elementary_split(d: &Divisor) -> Result<ElementaryDecomposition> {
    let nu = d.nonnegative_multiplicities().ok_or_else(|| {
        let (m, c) = d
            .psi_coeffs()
            .iter()
            .find(|(_, c)| !c.is_integer() || *c < &BigRational::zero())
            .expect("some multiplicity is bad");
        Error::NotCharacteristicPolynomial {
            order: *m,
            coeff: c.to_string(),
        }
    })?;
    let nu_max = nu.values().copied().max().unwrap_or(0);
    let sets = (1..=nu_max)
        .map(|j| nu.iter().rev().filter(|(_, &c)| c >= j).map(|(&m, _)| m).collect())
        .collect();
    Ok(ElementaryDecomposition { sets })
}

/// Graph verdicts for one run of equal elementary sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetVerdict {
    pub j_from: usize,
    pub j_to: usize,
    #[serde(rename = "M")]
    pub m: Vec<u64>,
    #[serde(rename = "I")]
    pub condition_i: bool,
    #[serde(rename = "II")]
    pub condition_ii: bool,
    pub strong: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementarySetsReport {
    pub verdict: Verdict,
    /// `ν_max`, the number of elementary divisors.
    pub sets: usize,
    /// One entry per run of equal sets; graphs are built once per run.
    pub distinct: Vec<SetVerdict>,
    /// Every set also satisfies the strong condition.
    pub all_strong: bool,
}

impl ElementarySetsReport {
    pub fn not_applicable() -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            sets: 0,
            distinct: Vec::new(),
            all_strong: false,
        }
    }

    /// Verdicts for `M_j`, 1-based.
    pub fn verdict_for(&self, j: usize) -> Option<&SetVerdict> {
        self.distinct.iter().find(|v| v.j_from <= j && j <= v.j_to)
    }
}

/// Checks condition (I) on every elementary set of `d`.
pub fn elementary_sets_for_divisor(d: &Divisor) -> Result<ElementarySetsReport> {
    let dec = elementary_split(d)?;
    let mut distinct = Vec::new();
    for (from, to, set) in dec.distinct() {
        let g = build_graph(set)?;
        distinct.push(SetVerdict {
            j_from: from,
            j_to: to,
            m: set.to_vec(),
            condition_i: g.condition_i(),
            condition_ii: g.condition_ii(),
            strong: g.strong_condition(),
        });
    }
    Ok(ElementarySetsReport {
        verdict: Verdict::from_bool(distinct.iter().all(|v| v.condition_i)),
        sets: dec.nu_max(),
        all_strong: distinct.iter().all(|v| v.strong),
        distinct,
    })
}

/// Condition (I) on every elementary set of `D_w`; not applicable
/// without (C1).
pub fn elementary_sets_check(ws: &WeightSystem) -> Result<ElementarySetsReport> {
    if !check_conditions(ws)?.c1 {
        return Ok(ElementarySetsReport::not_applicable());
    }
    elementary_sets_for_divisor(&divisor_d(ws))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SaitoReport {
    pub d_w: u64,
    /// All `w_j ≤ 1/2`. Above 1/2 the weights are not determined by the
    /// singularity (`xy` has weights `(w, 1-w)`), so `d_w` means nothing.
    pub all_at_most_half: bool,
    /// `ν(d_w) > 0` or (`d_w` even and `ν(d_w/2) > 0`).
    pub order_or_half: bool,
    /// All `w_j < 1/2`.
    pub all_below_half: bool,
    /// `ν(d_w) > 0`.
    pub order_present: bool,
}

impl SaitoReport {
    pub fn order_or_half_verdict(&self) -> Verdict {
        if self.all_at_most_half {
            Verdict::from_bool(self.order_or_half)
        } else {
            Verdict::NotApplicable
        }
    }

    pub fn order_verdict(&self) -> Verdict {
        if self.all_below_half {
            Verdict::from_bool(self.order_present)
        } else {
            Verdict::NotApplicable
        }
    }
}

pub fn saito_check(ws: &WeightSystem) -> Result<SaitoReport> {
    let d = divisor_d(ws);
    let nu = d.nonnegative_multiplicities().ok_or_else(|| {
        let (m, c) = d
            .psi_coeffs()
            .iter()
            .find(|(_, c)| !c.is_integer() || *c < &BigRational::zero())
            .expect("some multiplicity is bad");
        Error::NotCharacteristicPolynomial {
            order: *m,
            coeff: c.to_string(),
        }
    })?;
    let d_w = ws.dw();
    let positive = |m: u64| nu.get(&m).is_some_and(|&c| c > 0);
    let order_present = positive(d_w);
    Ok(SaitoReport {
        d_w,
        all_at_most_half: ws.v().iter().all(|&v| 2 * v <= ws.d()),
        order_or_half: order_present || (d_w % 2 == 0 && positive(d_w / 2)),
        all_below_half: ws.all_weights_below_half(),
        order_present,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_example() {
        let d = Divisor::from_psi_ints(&[(15, 3), (5, 4), (3, 4), (1, 4)]);
        let dec = elementary_split(&d).unwrap();
        assert_eq!(dec.nu_max(), 4);
        assert_eq!(dec.sets[0], vec![15, 5, 3, 1]);
        assert_eq!(dec.sets[3], vec![5, 3, 1]);
        assert_eq!(dec.reconstruct(), d);
        assert_eq!(dec.distinct().len(), 2);
        assert!(elementary_split(&Divisor::from_psi_ints(&[(2, -1)])).is_err());
    }

    #[test]
    fn saito_simple() {
        let ws: WeightSystem = "1,1:2".parse().unwrap();
        let r = saito_check(&ws).unwrap();
        assert!(!r.all_below_half && r.all_at_most_half && r.order_or_half);
        let r = saito_check(&"29,31:60".parse().unwrap()).unwrap();
        assert!(!r.order_or_half);
        assert_eq!(r.order_or_half_verdict(), Verdict::NotApplicable);
        let ws: WeightSystem = "1/4,1/6,5/12".parse().unwrap();
        assert!(saito_check(&ws).unwrap().order_present);
    }
}
