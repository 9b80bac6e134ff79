//! Golden examples with known divisors, elementary sets and graph
//! verdicts. Each fixture recomputes its values and reports every
//! mismatch as a line of text.

use crate::cyclo_algebra::Divisor;
use crate::error::Result;
use crate::families::{d_even, d_odd, saito_family, saito_members, thom_sebastiani};
use crate::monodromy::{elementary_sets_for_divisor, elementary_split, saito_check};
use crate::orlik_graph::{build_graph, Edge};
use crate::weight_systems::{check_conditions, divisor_d, spectrum, ConditionKind, WeightSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt::Debug;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureResult {
    pub name: &'static str,
    pub checks: usize,
    pub diffs: Vec<String>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

struct Checker {
    name: &'static str,
    checks: usize,
    diffs: Vec<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            diffs: Vec::new(),
        }
    }

    fn eq<T: PartialEq + Debug>(&mut self, what: &str, got: T, want: T) {
        self.checks += 1;
        if got != want {
            self.diffs.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn ok(&mut self, what: &str, cond: bool) {
        self.eq(what, cond, true);
    }

    fn run(mut self, body: impl FnOnce(&mut Self) -> Result<()>) -> FixtureResult {
        if let Err(e) = body(&mut self) {
            self.diffs.push(format!("error: {e}"));
        }
        FixtureResult {
            name: self.name,
            checks: self.checks,
            diffs: self.diffs,
        }
    }
}

fn ws(text: &str) -> WeightSystem {
    text.parse().expect("fixture weight system")
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Lefschetz numbers at each of `ks`.
fn lefschetz_at(d: &Divisor, ks: &[u64]) -> Result<Vec<BigRational>> {
    ks.iter().map(|&k| d.lefschetz(k)).collect()
}

fn chi_at(d: &Divisor, ks: &[u64]) -> Vec<BigRational> {
    ks.iter().map(|&k| d.chi_at(k)).collect()
}

fn rats(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Descending elementary sets of `d`.
fn sets_of(d: &Divisor) -> Result<Vec<Vec<u64>>> {
    Ok(elementary_split(d)?.sets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphVerdict {
    ConditionI,
    ConditionII,
    Neither,
}

pub fn graph_verdict(m: &[u64]) -> Result<GraphVerdict> {
    let g = build_graph(m)?;
    Ok(if g.condition_i() {
        GraphVerdict::ConditionI
    } else if g.condition_ii() {
        GraphVerdict::ConditionII
    } else {
        GraphVerdict::Neither
    })
}

/// `(1,24,33,58;265)`: integer solutions exist but (C1) fails on the
/// variables with weights 24 and 33.
pub fn ivlev() -> FixtureResult {
    Checker::new("ivlev").run(|c| {
        let w = ws("1,24,33,58:265");
        let report = check_conditions(&w)?;
        c.eq("c1", report.c1, false);
        c.eq("c1_bar", report.c1_bar, true);
        c.ok(
            "failing subset {24,33}",
            report.failures(ConditionKind::C1).any(|f| f.subset == [1, 2]),
        );
        c.eq("mu", w.milnor_product(), rat(66516));
        let d = divisor_d(&w);
        c.eq("(L(265),L(1))", lefschetz_at(&d, &[265, 1])?, rats(&[66516, 1]));
        c.eq("(chi(265),chi(1))", chi_at(&d, &[265, 1]), rats(&[251, 1]));
        c.eq("D_w", d.clone(), Divisor::from_chi_ints(&[(265, 251), (1, 1)]));
        c.eq("degree", d.degree(), rat(66516));
        let spec = spectrum(&w)?;
        c.ok("rho nonnegative", spec.is_nonnegative());
        c.eq("rho(1)", spec.milnor, BigInt::from(66516));
        Ok(())
    })
}

/// Lefschetz numbers, Λ-coefficients and Ψ-decompositions of two
/// systems with three and four variables.
pub fn lefschetz_tables() -> FixtureResult {
    Checker::new("lefschetz_tables").run(|c| {
        let d = divisor_d(&ws("1/4,1/6,5/12"));
        let ks = [12, 4, 6, 1];
        c.eq("1/4,1/6,5/12 L", lefschetz_at(&d, &ks)?, rats(&[21, 3, 5, -1]));
        c.eq("1/4,1/6,5/12 chi", chi_at(&d, &ks), rats(&[1, 1, 1, -1]));
        let lam = Divisor::from_chi_ints(&[(12, 1), (4, 1), (6, 1), (1, -1)]);
        c.eq("1/4,1/6,5/12 D_w", d.clone(), lam);
        let psi = Divisor::lambda(12)
            + Divisor::from_psi_ints(&[(6, 1), (4, 1), (3, 1), (2, 1), (1, 1)])
            + Divisor::psi(2);
        c.eq("1/4,1/6,5/12 Psi form", d, psi);

        let d = divisor_d(&ws("1/5,2/5,1/6,5/12"));
        let ks = [60, 30, 12, 5, 6, 1];
        c.eq(
            "1/5,2/5,1/6,5/12 L",
            lefschetz_at(&d, &ks)?,
            rats(&[42, -30, 7, 6, -5, 1]),
        );
        c.eq(
            "1/5,2/5,1/6,5/12 chi",
            chi_at(&d, &ks),
            rats(&[1, -1, 1, 1, -1, 1]),
        );
        let psi = Divisor::from_psi_ints(&[(60, 1), (20, 1), (12, 1), (5, 1), (4, 1), (1, 1)])
            + Divisor::from_psi_ints(&[(12, 1), (4, 1), (1, 1)]);
        c.eq("1/5,2/5,1/6,5/12 Psi form", d, psi);
        Ok(())
    })
}

/// `D_{2q} = Λ_{2q-1} + Λ_1` and `D_{2q+1} = Λ_{4q} - Λ_{2q} + Λ_1`,
/// with their Lefschetz numbers, for `q = 2..=10`.
pub fn d_series() -> FixtureResult {
    Checker::new("d_series").run(|c| {
        for q in 2..=10u64 {
            let qi = q as i64;
            let even = divisor_d(&d_even(q)?);
            c.eq(
                &format!("D_{} L", 2 * q),
                lefschetz_at(&even, &[2 * q - 1, 1])?,
                rats(&[2 * qi, 1]),
            );
            c.eq(
                &format!("D_{} chi", 2 * q),
                chi_at(&even, &[2 * q - 1, 1]),
                rats(&[1, 1]),
            );
            c.eq(
                &format!("D_{}", 2 * q),
                even,
                Divisor::from_chi_ints(&[(2 * q - 1, 1), (1, 1)]),
            );
            let odd = divisor_d(&d_odd(q)?);
            c.eq(
                &format!("D_{} L", 2 * q + 1),
                lefschetz_at(&odd, &[4 * q, 2 * q, 1])?,
                rats(&[2 * qi + 1, -(2 * qi - 1), 1]),
            );
            c.eq(
                &format!("D_{}", 2 * q + 1),
                odd,
                Divisor::from_chi_ints(&[(4 * q, 1), (2 * q, -1), (1, 1)]),
            );
        }
        Ok(())
    })
}

/// Tensor product of `Φ_12 Φ_6² Φ_4² Φ_2` and `Φ_5 Φ_1`.
pub fn tensor_even() -> FixtureResult {
    Checker::new("tensor_even").run(|c| {
        let f1 = Divisor::from_psi_ints(&[(12, 1), (6, 2), (4, 2), (2, 1)]);
        let f2 = Divisor::from_psi_ints(&[(5, 1), (1, 1)]);
        let t = f1.tensor(&f2);
        c.eq(
            "f1 (x) f2",
            t.clone(),
            Divisor::from_psi_ints(&[
                (60, 1),
                (30, 2),
                (20, 2),
                (12, 1),
                (10, 1),
                (6, 2),
                (4, 2),
                (2, 1),
            ]),
        );
        c.eq("sets of f1", sets_of(&f1)?, vec![vec![12, 6, 4, 2], vec![6, 4]]);
        c.eq("sets of f2", sets_of(&f2)?, vec![vec![5, 1]]);
        c.eq(
            "sets of f1 (x) f2",
            sets_of(&t)?,
            vec![vec![60, 30, 20, 12, 10, 6, 4, 2], vec![30, 20, 6, 4]],
        );
        use GraphVerdict::*;
        for (m, want) in [
            (&[12, 6, 4, 2][..], ConditionI),
            (&[6, 4], ConditionII),
            (&[5, 1], ConditionI),
            (&[60, 30, 20, 12, 10, 6, 4, 2], ConditionI),
            (&[30, 20, 6, 4], Neither),
        ] {
            c.eq(&format!("verdict {m:?}"), graph_verdict(m)?, want);
        }
        Ok(())
    })
}

/// Tensor product of `Φ_7² Φ_3 Φ_1` and `Φ_5² Φ_3 Φ_1`.
pub fn tensor_odd() -> FixtureResult {
    Checker::new("tensor_odd").run(|c| {
        let f1 = Divisor::from_psi_ints(&[(7, 2), (3, 1), (1, 1)]);
        let f2 = Divisor::from_psi_ints(&[(5, 2), (3, 1), (1, 1)]);
        let t = f1.tensor(&f2);
        c.eq(
            "f1 (x) f2",
            t.clone(),
            Divisor::from_psi_ints(&[
                (35, 4),
                (21, 2),
                (15, 2),
                (7, 2),
                (5, 2),
                (3, 3),
                (1, 3),
            ]),
        );
        c.eq("sets of f1", sets_of(&f1)?, vec![vec![7, 3, 1], vec![7]]);
        c.eq("sets of f2", sets_of(&f2)?, vec![vec![5, 3, 1], vec![5]]);
        let full = vec![35, 21, 15, 7, 5, 3, 1];
        c.eq(
            "sets of f1 (x) f2",
            sets_of(&t)?,
            vec![full.clone(), full, vec![35, 3, 1], vec![35]],
        );
        use GraphVerdict::*;
        for (m, want) in [
            (&[35, 21, 15, 7, 5, 3, 1][..], ConditionI),
            (&[35, 3, 1], Neither),
            (&[35], ConditionI),
        ] {
            c.eq(&format!("verdict {m:?}"), graph_verdict(m)?, want);
        }
        Ok(())
    })
}

/// Fermat system `(1/6, 1/10, 1/15)`: 22 elementary divisors, the last
/// two satisfy (I) without a root.
pub fn fermat_6_10_15() -> FixtureResult {
    Checker::new("fermat_6_10_15").run(|c| {
        let d = divisor_d(&ws("1/6,1/10,1/15"));
        c.eq(
            "D_w",
            d.clone(),
            Divisor::from_chi_ints(&[(30, 20), (6, 1), (10, 1), (15, 1), (1, -1)]),
        );
        let sets = sets_of(&d)?;
        c.eq("number of sets", sets.len(), 22);
        c.ok(
            "M_1..M_20 = divisors of 30",
            sets[..20].iter().all(|s| s == &[30, 15, 10, 6, 5, 3, 2, 1]),
        );
        c.eq("M_21", sets[20].clone(), vec![15, 10, 6, 5, 3, 2, 1]);
        c.eq("M_22", sets[21].clone(), vec![5, 3, 2, 1]);
        c.eq(
            "g_21",
            Divisor::from_psi_ints(&[(6, 1), (10, 1), (15, 1), (2, 1), (3, 1), (5, 1), (1, 1)]),
            Divisor::from_chi_ints(&[(6, 1), (10, 1), (15, 1), (2, -1), (3, -1), (5, -1), (1, 1)]),
        );
        let report = elementary_sets_for_divisor(&d)?;
        for j in [21, 22] {
            let v = report.verdict_for(j).expect("set exists");
            c.eq(&format!("M_{j} (I)"), v.condition_i, true);
            c.eq(&format!("M_{j} strong"), v.strong, false);
        }
        c.ok("all sets (I)", report.distinct.iter().all(|v| v.condition_i));
        Ok(())
    })
}

/// `(2/15, 1/5, 1/3)`: the fourth set `{5,3,1}` satisfies (I) without a
/// root.
pub fn weights_2_15() -> FixtureResult {
    Checker::new("weights_2_15").run(|c| {
        let d = divisor_d(&ws("2/15,1/5,1/3"));
        c.eq(
            "D_w (Lambda)",
            d.clone(),
            Divisor::from_chi_ints(&[(15, 3), (5, 1), (3, 1), (1, -1)]),
        );
        c.eq(
            "D_w (Psi)",
            d.clone(),
            Divisor::from_psi_ints(&[(15, 3), (5, 4), (3, 4), (1, 4)]),
        );
        let sets = sets_of(&d)?;
        let full = vec![15, 5, 3, 1];
        c.eq(
            "sets",
            sets,
            vec![full.clone(), full.clone(), full, vec![5, 3, 1]],
        );
        let g = build_graph(&[5, 3, 1])?;
        c.eq("M_4 (I)", g.condition_i(), true);
        c.eq("M_4 strong", g.strong_condition(), false);
        Ok(())
    })
}

/// `D_7 ⊗ D_11`, the smallest member of the Saito family.
pub fn d7_d11() -> FixtureResult {
    Checker::new("d7_d11").run(|c| {
        let joined = thom_sebastiani(&d_odd(3)?, &d_odd(5)?)?;
        let member = saito_family(1, 3, 5)?;
        c.eq("join = family(1,3,5)", joined.reduce(), member.reduce());
        c.eq(
            "weights",
            member.normalize(),
            vec![
                BigRational::new(1.into(), 6.into()),
                BigRational::new(5.into(), 12.into()),
                BigRational::new(1.into(), 10.into()),
                BigRational::new(9.into(), 20.into()),
            ],
        );
        c.eq("mu", member.milnor_product(), rat(77));
        c.eq("d_w", member.dw(), 60);
        let d = divisor_d(&member);
        c.eq(
            "D_w",
            d.clone(),
            Divisor::from_chi_ints(&[(30, 2), (12, 1), (20, 1), (6, -1), (10, -1), (1, 1)]),
        );
        c.eq(
            "sets",
            sets_of(&d)?,
            vec![
                vec![30, 20, 15, 12, 10, 6, 5, 4, 3, 2, 1],
                vec![30, 15, 10, 6, 5, 4, 3, 2, 1],
                vec![1],
            ],
        );
        let report = elementary_sets_for_divisor(&d)?;
        for j in [1, 2] {
            let v = report.verdict_for(j).expect("set exists");
            c.eq(&format!("M_{j} (I)"), v.condition_i, true);
            c.eq(&format!("M_{j} strong"), v.strong, false);
        }
        let saito = saito_check(&member)?;
        c.eq("all w_j < 1/2", saito.all_below_half, true);
        c.eq("nu(d_w) > 0", saito.order_present, false);
        c.eq("nu(d_w) or nu(d_w/2) > 0", saito.order_or_half, true);
        Ok(())
    })
}

/// All members of the Saito family with `μ ≤ 500`.
pub fn saito_family_500() -> FixtureResult {
    Checker::new("saito_family_500").run(|c| {
        let members = saito_members(500);
        c.eq("members", members.len(), 25);
        c.eq("k = 1", members.iter().filter(|m| m.0 == 1).count(), 23);
        c.eq("k = 2", members.iter().filter(|m| m.0 == 2).count(), 2);
        for &(k, q1, q2) in &members {
            let w = saito_family(k, q1, q2)?;
            let r = saito_check(&w)?;
            let tag = format!("({k},{q1},{q2})");
            c.ok(&format!("{tag} all w_j < 1/2"), r.all_below_half);
            c.ok(&format!("{tag} nu(d_w) = 0"), !r.order_present);
            c.ok(&format!("{tag} nu(d_w/2) > 0"), r.order_or_half);
        }
        Ok(())
    })
}

fn edges(list: &[(u64, u64, u64)]) -> Vec<Edge> {
    let mut out: Vec<Edge> = list
        .iter()
        .map(|&(from, to, prime)| Edge { from, to, prime })
        .collect();
    out.sort();
    out
}

/// Edge sets of the drawn graphs, each edge `m → m/p^i` labelled by `p`.
pub fn graph_edges() -> FixtureResult {
    Checker::new("graph_edges").run(|c| {
        let cases: Vec<(&[u64], Vec<Edge>)> = vec![
            (
                &[60, 30, 20, 12, 10, 6, 4, 2],
                edges(&[
                    (60, 30, 2),
                    (60, 20, 3),
                    (60, 12, 5),
                    (30, 10, 3),
                    (30, 6, 5),
                    (20, 10, 2),
                    (20, 4, 5),
                    (12, 6, 2),
                    (12, 4, 3),
                    (10, 2, 5),
                    (6, 2, 3),
                    (4, 2, 2),
                ]),
            ),
            (&[30, 20, 6, 4], edges(&[(30, 6, 5), (20, 4, 5)])),
            (
                &[35, 21, 15, 7, 5, 3, 1],
                edges(&[
                    (35, 7, 5),
                    (35, 5, 7),
                    (21, 7, 3),
                    (21, 3, 7),
                    (15, 5, 3),
                    (15, 3, 5),
                    (7, 1, 7),
                    (5, 1, 5),
                    (3, 1, 3),
                ]),
            ),
            (&[35, 3, 1], edges(&[(3, 1, 3)])),
            (&[35], Vec::new()),
            (
                &[15, 10, 6, 5, 3, 2, 1],
                edges(&[
                    (6, 3, 2),
                    (6, 2, 3),
                    (10, 5, 2),
                    (10, 2, 5),
                    (15, 5, 3),
                    (15, 3, 5),
                    (2, 1, 2),
                    (3, 1, 3),
                    (5, 1, 5),
                ]),
            ),
            (&[5, 3, 2, 1], edges(&[(2, 1, 2), (3, 1, 3), (5, 1, 5)])),
            (&[5, 3, 1], edges(&[(3, 1, 3), (5, 1, 5)])),
            (
                &[30, 20, 15, 12, 10, 6, 5, 4, 3, 2, 1],
                edges(&[
                    (30, 15, 2),
                    (30, 10, 3),
                    (30, 6, 5),
                    (20, 10, 2),
                    (20, 4, 5),
                    (15, 5, 3),
                    (15, 3, 5),
                    (12, 6, 2),
                    (12, 4, 3),
                    (10, 5, 2),
                    (10, 2, 5),
                    (6, 3, 2),
                    (6, 2, 3),
                    (5, 1, 5),
                    (4, 2, 2),
                    (3, 1, 3),
                    (2, 1, 2),
                ]),
            ),
            (
                &[30, 15, 10, 6, 5, 4, 3, 2, 1],
                edges(&[
                    (30, 15, 2),
                    (30, 10, 3),
                    (30, 6, 5),
                    (15, 5, 3),
                    (15, 3, 5),
                    (10, 5, 2),
                    (10, 2, 5),
                    (6, 3, 2),
                    (6, 2, 3),
                    (5, 1, 5),
                    (4, 2, 2),
                    (3, 1, 3),
                    (2, 1, 2),
                ]),
            ),
        ];
        for (m, want) in cases {
            let g = build_graph(m)?;
            let mut got = g.edges().to_vec();
            got.sort();
            c.eq(&format!("edges of {m:?}"), got, want);
        }
        Ok(())
    })
}

/// Runs every fixture.
pub fn run_all() -> Vec<FixtureResult> {
    vec![
        ivlev(),
        lefschetz_tables(),
        d_series(),
        tensor_even(),
        tensor_odd(),
        fermat_6_10_15(),
        weights_2_15(),
        d7_d11(),
        saito_family_500(),
        graph_edges(),
    ]
}
