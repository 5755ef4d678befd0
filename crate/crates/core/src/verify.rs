//! Trace-level checks of the Move-All and Visit-All contracts.

use serde::{Deserialize, Serialize};

use crate::engine::RunTrace;
use crate::error::{Error, Result};
use crate::geometry::{same_point_set, Point, Tolerance};

/// A permutation with `next[i] = prev[pi[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepPermutation {
    pub pi: Vec<usize>,
    pub fixed_point_free: bool,
    pub is_n_cycle: bool,
}

impl StepPermutation {
    pub fn from_indices(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        let mut seen = vec![false; n];
        for &j in &pi {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotAPermutation(format!("{pi:?} is not a bijection")));
            }
        }
        let fixed_point_free = pi.iter().enumerate().all(|(i, &j)| i != j);
        let cycles = cycle_decomposition(&pi);
        let is_n_cycle = n > 0 && cycles.len() == 1;
        debug_assert!(!is_n_cycle || permutation_order(&pi) == n);
        Ok(StepPermutation {
            pi,
            fixed_point_free,
            is_n_cycle,
        })
    }

    /// `π(C)`: robot `i` takes the position `C[pi[i]]`.
    pub fn apply(&self, config: &[Point]) -> Vec<Point> {
        self.pi.iter().map(|&j| config[j]).collect()
    }

    pub fn power(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.pi.len()).collect();
        for _ in 0..k {
            out = out.iter().map(|&i| self.pi[i]).collect();
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycle_decomposition(&self.pi)
    }
}

pub fn cycle_decomposition(pi: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; pi.len()];
    let mut cycles = Vec::new();
    for start in 0..pi.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = pi[i];
        }
        cycles.push(cycle);
    }
    cycles
}

/// Smallest `j > 0` with `pi^j = id`, found by repeated composition.
pub fn permutation_order(pi: &[usize]) -> usize {
    let id: Vec<usize> = (0..pi.len()).collect();
    let mut cur = pi.to_vec();
    let mut j = 1;
    while cur != id {
        cur = cur.iter().map(|&i| pi[i]).collect();
        j += 1;
    }
    j
}

/// The permutation taking `a` to `b`. Every point of `b` must match exactly
/// one point of `a` within tolerance.
pub fn extract_permutation(a: &[Point], b: &[Point], tol: Tolerance) -> Result<StepPermutation> {
    if a.len() != b.len() {
        return Err(Error::NotAPermutation(format!(
            "{} versus {} robots",
            a.len(),
            b.len()
        )));
    }
    let mut pi = Vec::with_capacity(b.len());
    for (i, q) in b.iter().enumerate() {
        let mut hits = a
            .iter()
            .enumerate()
            .filter(|(_, p)| p.approx_eq(*q, tol))
            .map(|(j, _)| j);
        match (hits.next(), hits.next()) {
            (Some(j), None) => pi.push(j),
            (None, _) => {
                return Err(Error::NotAPermutation(format!(
                    "robot {i} is at no earlier position"
                )))
            }
            (Some(_), Some(_)) => {
                return Err(Error::NotAPermutation(format!(
                    "robot {i} matches several positions"
                )))
            }
        }
    }
    StepPermutation::from_indices(pi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spec {
    MoveAll,
    VisitAll,
}

impl std::str::FromStr for Spec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "move-all" | "MoveAll" => Ok(Spec::MoveAll),
            "visit-all" | "VisitAll" => Ok(Spec::VisitAll),
            other => Err(format!("unknown spec {other:?}")),
        }
    }
}

/// Which `j` the shift property `C_{j+k} ∈ Π(C_j)` is checked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftCheck {
    /// Every `j`. Holds for every oblivious protocol that meets the spec.
    Every,
    /// Multiples of `k` only.
    Aligned,
    /// `Every` unless some robot ever holds a set memory bit.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub round: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecVerdict {
    pub spec: Spec,
    pub k: usize,
    pub pass: bool,
    pub violation: Option<Violation>,
    /// Set when the trace is too short to observe a full Visit-All cycle.
    pub provisional: bool,
}

impl SpecVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

fn uses_memory(trace: &RunTrace) -> bool {
    trace
        .rounds
        .iter()
        .any(|r| r.bits.iter().any(|b| b.is_set()))
}

fn first_violation(
    trace: &RunTrace,
    spec: Spec,
    k: usize,
    shifts: ShiftCheck,
    tol: Tolerance,
) -> Option<Violation> {
    let configs: Vec<&[Point]> = trace.configurations().collect();
    let last = configs.len().checked_sub(1)?;
    let fail = |round: usize, reason: String| Some(Violation { round, reason });
    if k == 0 {
        return fail(0, "k must be positive".into());
    }
    let mut found: Vec<Violation> = Vec::new();
    if last >= k {
        match extract_permutation(configs[0], configs[k], tol) {
            Err(e) => found.push(Violation {
                round: k,
                reason: e.to_string(),
            }),
            Ok(pi) => {
                if spec == Spec::MoveAll && !pi.fixed_point_free {
                    let r = pi
                        .pi
                        .iter()
                        .enumerate()
                        .position(|(i, &j)| i == j)
                        .unwrap_or(0);
                    found.push(Violation {
                        round: k,
                        reason: format!("fixed point: robot {r}"),
                    });
                } else if spec == Spec::VisitAll && !pi.is_n_cycle {
                    found.push(Violation {
                        round: k,
                        reason: format!("not an n-cycle: cycles {:?}", pi.cycles()),
                    });
                }
                for i in 2..=last / k {
                    let expected = pi.power(i);
                    let ok = (0..expected.len())
                        .all(|r| configs[i * k][r].approx_eq(configs[0][expected[r]], tol));
                    if !ok {
                        found.push(Violation {
                            round: i * k,
                            reason: format!("configuration differs from the {i}-th power"),
                        });
                        break;
                    }
                }
            }
        }
    } else if trace.error.is_none() {
        return fail(last, format!("trace ends before round {k}"));
    }

    let every = match shifts {
        ShiftCheck::Every => true,
        ShiftCheck::Aligned => false,
        ShiftCheck::Auto => !uses_memory(trace),
    };
    let step = if every { 1 } else { k };
    let shifts_end = if last >= k { last - k + 1 } else { 0 };
    for j in (0..shifts_end).step_by(step) {
        if !same_point_set(configs[j], configs[j + k], tol) {
            found.push(Violation {
                round: j + k,
                reason: format!(
                    "configuration {} is not a permutation of configuration {j}",
                    j + k
                ),
            });
            break;
        }
    }
    if let Some(err) = &trace.error {
        found.push(Violation {
            round: err.round,
            reason: format!("run stopped: {err}"),
        });
    }
    found.into_iter().min_by_key(|v| v.round)
}

/// Checks `C_{ik} = π^i(C_0)` for a single `π` of the class required by
/// `spec`, together with the shift property `C_{j+k} ∈ Π(C_j)`.
pub fn check_k_step_spec_with(
    trace: &RunTrace,
    spec: Spec,
    k: usize,
    shifts: ShiftCheck,
    tol: Tolerance,
) -> SpecVerdict {
    let violation = first_violation(trace, spec, k, shifts, tol);
    let n = trace.robots();
    let steps = trace.rounds.len().saturating_sub(1);
    SpecVerdict {
        spec,
        k,
        pass: violation.is_none(),
        violation,
        provisional: spec == Spec::VisitAll && steps < k.saturating_mul(n),
    }
}

pub fn check_k_step_spec(trace: &RunTrace, spec: Spec, k: usize, tol: Tolerance) -> SpecVerdict {
    check_k_step_spec_with(trace, spec, k, ShiftCheck::Auto, tol)
}

/// `count[i][l]`: how many of the sampled configurations put robot `i` on
/// initial location `l`. Configurations `0, k, 2k, …` are sampled, leaving out
/// the final one so that a run of `T` rounds contributes `T / k` samples.
pub fn visit_matrix(trace: &RunTrace, k: usize, tol: Tolerance) -> Vec<Vec<usize>> {
    let n = trace.robots();
    let mut count = vec![vec![0; n]; n];
    let Some(first) = trace.rounds.first() else {
        return count;
    };
    let end = trace.rounds.len().saturating_sub(1).max(1);
    for record in trace.rounds[..end].iter().step_by(k.max(1)) {
        for (i, p) in record.positions.iter().enumerate() {
            if let Some(l) = first.positions.iter().position(|q| q.approx_eq(*p, tol)) {
                count[i][l] += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RoundRecord;
    use crate::protocols::MemoryBit;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn order_n_is_not_enough_for_an_n_cycle() {
        // (0 1)(2 3 4)(5) has order 6 on six points.
        let p = StepPermutation::from_indices(vec![1, 0, 3, 4, 2, 5]).unwrap();
        assert_eq!(permutation_order(&p.pi), 6);
        assert!(!p.is_n_cycle);
        assert!(!p.fixed_point_free);
    }

    fn square() -> Vec<Point> {
        vec![
            Point::new(1., 1.),
            Point::new(-1., 1.),
            Point::new(-1., -1.),
            Point::new(1., -1.),
        ]
    }

    fn trace_of(configs: Vec<Vec<Point>>) -> RunTrace {
        let n = configs[0].len();
        RunTrace {
            rounds: configs
                .into_iter()
                .map(|positions| RoundRecord {
                    positions,
                    bits: vec![MemoryBit::ZERO; n],
                    moved: vec![true; n],
                })
                .collect(),
            error: None,
        }
    }

    fn shift(c: &[Point], s: usize) -> Vec<Point> {
        (0..c.len()).map(|i| c[(i + s) % c.len()]).collect()
    }

    #[test]
    fn identity_permutation() {
        let p = extract_permutation(&square(), &square(), tol()).unwrap();
        assert_eq!(p.pi, vec![0, 1, 2, 3]);
        assert!(!p.fixed_point_free);
    }

    #[test]
    fn quarter_and_half_shifts() {
        let p = extract_permutation(&square(), &shift(&square(), 1), tol()).unwrap();
        assert!(p.fixed_point_free && p.is_n_cycle);
        let p = extract_permutation(&square(), &shift(&square(), 2), tol()).unwrap();
        assert!(p.fixed_point_free && !p.is_n_cycle);
        assert_eq!(permutation_order(&p.pi), 2);
    }

    #[test]
    fn ambiguous_or_missing_points_are_rejected() {
        let mut b = square();
        b[0] = Point::new(5., 5.);
        assert!(matches!(
            extract_permutation(&square(), &b, tol()),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn visit_all_square_trace() {
        let c = square();
        let t = trace_of((0..=4).map(|s| shift(&c, s)).collect());
        let v = check_k_step_spec(&t, Spec::VisitAll, 1, tol());
        assert!(v.pass && !v.provisional, "{v:?}");
        assert!(visit_matrix(&t, 1, tol()).iter().flatten().all(|&x| x == 1));
    }

    #[test]
    fn antipodal_trace_is_move_all_only() {
        let c = square();
        let t = trace_of((0..=4).map(|s| shift(&c, 2 * s)).collect());
        assert!(check_k_step_spec(&t, Spec::MoveAll, 1, tol()).pass);
        assert!(!check_k_step_spec(&t, Spec::VisitAll, 1, tol()).pass);
    }

    #[test]
    fn identity_trace_fails_move_all_at_round_one() {
        let t = trace_of(vec![square(); 3]);
        let v = check_k_step_spec(&t, Spec::MoveAll, 1, tol());
        let violation = v.violation.unwrap();
        assert_eq!(violation.round, 1);
        assert!(violation.reason.contains("fixed point"));
        let m = visit_matrix(&t, 1, tol());
        for (i, row) in m.iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                assert_eq!(x > 0, i == l);
            }
        }
    }

    #[test]
    fn short_trace_is_provisional() {
        let c = square();
        let t = trace_of((0..=2).map(|s| shift(&c, s)).collect());
        let v = check_k_step_spec(&t, Spec::VisitAll, 1, tol());
        assert!(v.pass && v.provisional);
    }

    #[test]
    fn verdict_json_shape() {
        let t = trace_of(vec![square(); 2]);
        let json = check_k_step_spec(&t, Spec::MoveAll, 1, tol()).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["spec"], "move-all");
        assert_eq!(v["pass"], false);
        assert_eq!(v["violation"]["round"], 1);
    }
}
