//! Direct and transitive revealed-preference relations and the e-GARP test.

use std::collections::VecDeque;

use crate::error::Result;
use crate::model::{cross_expenditures, CrossMatrix, Dataset, EfficiencyVector};
use crate::scalar::Scalar;

/// Square boolean matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BoolMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    /// Successors of `i` in increasing order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Warshall's algorithm: afterwards `(i, j)` is set iff a path of
    /// length ≥ 1 leads from `i` to `j`.
    pub fn transitive_closure(&self) -> BoolMatrix {
        let mut r = self.clone();
        let w = self.words;
        for k in 0..self.n {
            let (kw, kb) = (k / 64, 1u64 << (k % 64));
            for i in 0..self.n {
                if r.bits[i * w + kw] & kb != 0 {
                    for j in 0..w {
                        let v = r.bits[k * w + j];
                        r.bits[i * w + j] |= v;
                    }
                }
            }
        }
        r
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

impl std::fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// `weak` is `≽₀*`, `strict` is `≻₀*`, `closure` is `≽*` (chains of at
/// least one step).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealedRelation {
    pub weak: BoolMatrix,
    pub strict: BoolMatrix,
    pub closure: BoolMatrix,
}

impl RevealedRelation {
    /// Builds the relations from breakpoint ratios: `x^t ≽₀* x^s` iff
    /// `r[t][s] ≤ e^t`, strict iff `r[t][s] < e^t`.
    pub fn from_cross<S: Scalar>(cross: &CrossMatrix<S>, e: impl Fn(usize) -> S) -> Self {
        let n = cross.observations();
        let mut weak = BoolMatrix::new(n);
        let mut strict = BoolMatrix::new(n);
        for t in 0..n {
            let e_t = e(t);
            for s in 0..n {
                let r = cross.ratio(t, s);
                if r.le_tol(&e_t) {
                    weak.set(t, s, true);
                    if r.lt_tol(&e_t) {
                        strict.set(t, s, true);
                    }
                }
            }
        }
        let closure = weak.transitive_closure();
        RevealedRelation {
            weak,
            strict,
            closure,
        }
    }

    pub fn observations(&self) -> usize {
        self.weak.size()
    }

    /// First `(t, s)` in row-major order with `x^t ≽* x^s` and
    /// `x^s ≻₀* x^t`.
    pub fn first_violation(&self) -> Option<(usize, usize)> {
        let n = self.observations();
        (0..n)
            .flat_map(|t| (0..n).map(move |s| (t, s)))
            .find(|&(t, s)| self.closure.get(t, s) && self.strict.get(s, t))
    }

    /// Shortest cycle through at least one strict edge, or `None` when
    /// e-GARP holds. Ties go to the lowest `u`, then the lowest `v`, of the
    /// strict edge `u → v` that opens the cycle.
    pub fn shortest_violation(&self) -> Option<CycleWitness> {
        self.first_violation()?;
        let n = self.observations();
        let mut trees: Vec<Option<BfsTree>> = vec![None; n];
        let mut best: Option<(usize, usize, usize)> = None;
        for u in 0..n {
            for v in self.strict.row(u) {
                if !self.closure.get(v, u) {
                    continue;
                }
                let tree = trees[v].get_or_insert_with(|| self.bfs(v));
                let len = tree.dist[u];
                if best.is_none_or(|(_, _, b)| len < b) {
                    best = Some((u, v, len));
                }
            }
        }
        let (u, v, _) = best?;
        let tree = trees[v].as_ref().expect("tree was built");
        let mut indices = vec![u];
        let mut k = u;
        while k != v {
            k = tree.parent[k];
            indices.push(k);
        }
        indices[1..].reverse();
        indices.push(u);
        Some(CycleWitness {
            indices,
            strict_edge: 0,
        })
    }

    /// BFS over weak edges from `from`, successors in increasing order.
    /// `dist[to]` counts edges on a shortest path of at least one edge.
    fn bfs(&self, from: usize) -> BfsTree {
        let n = self.observations();
        let mut tree = BfsTree {
            dist: vec![usize::MAX; n],
            parent: vec![usize::MAX; n],
        };
        let mut depth = vec![0usize; n];
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; n];
        seen[from] = true;
        while let Some(i) = queue.pop_front() {
            for j in self.weak.row(i) {
                if tree.dist[j] == usize::MAX {
                    tree.dist[j] = depth[i] + 1;
                    tree.parent[j] = i;
                }
                if !seen[j] {
                    seen[j] = true;
                    depth[j] = depth[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        tree
    }
}

#[derive(Clone)]
struct BfsTree {
    dist: Vec<usize>,
    parent: Vec<usize>,
}

/// A revealed-preference cycle `t₁ → t₂ → … → t₁` in which every step is a
/// weak direct relation and the step starting at `strict_edge` is strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub indices: Vec<usize>,
    pub strict_edge: usize,
}

impl CycleWitness {
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Re-checks the witness against a relation.
    pub fn is_valid_for(&self, rel: &RevealedRelation) -> bool {
        self.indices.len() >= 2
            && self.indices.first() == self.indices.last()
            && self.strict_edge + 1 < self.indices.len()
            && self.edges().all(|(a, b)| rel.weak.get(a, b))
            && rel
                .strict
                .get(self.indices[self.strict_edge], self.indices[self.strict_edge + 1])
    }

    /// Indices numbered from one, as printed in reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarpVerdict {
    pub holds: bool,
    pub witness: Option<CycleWitness>,
}

pub fn direct_relations<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<RevealedRelation> {
    e.check_len(d.observations())?;
    let cross = cross_expenditures(d);
    Ok(RevealedRelation::from_cross(&cross, |t| e.get(t).clone()))
}

pub fn check_e_garp<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<GarpVerdict> {
    Ok(verdict(&direct_relations(d, e)?))
}

/// e-GARP under the uniform vector `(e, …, e)`; `e` is not range-checked,
/// so the bisection in the CCEI search can probe `0`.
pub fn check_uniform<S: Scalar>(cross: &CrossMatrix<S>, e: &S) -> RevealedRelation {
    RevealedRelation::from_cross(cross, |_| e.clone())
}

pub fn verdict(rel: &RevealedRelation) -> GarpVerdict {
    let witness = rel.shortest_violation();
    GarpVerdict {
        holds: witness.is_none(),
        witness,
    }
}
