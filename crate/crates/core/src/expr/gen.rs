use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExprBuilder, ExprError, MultiExpr, NodeId};
use crate::label::{Label, LabelSet};

const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Unions of random fragment pairs.
    Random,
    /// Every union has a fresh Intro child.
    Linear,
}

/// Knobs for [`gen_random_expr`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorProfile {
    pub shape: Shape,
    /// Largest label set an Intro may carry.
    pub max_intro_labels: u32,
    /// Operations attempted after each union (and once on each leaf).
    pub ops_per_step: u32,
    pub join_prob: f64,
    pub relabel_prob: f64,
    /// Fraction of relabels that forget their label.
    pub forget_prob: f64,
    /// Only emit joins that create no already-present edge.
    pub irredundant_only: bool,
    /// Regenerate (with a derived seed) until the graph has this many edges.
    pub min_edges: usize,
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        GeneratorProfile {
            shape: Shape::Random,
            max_intro_labels: 2,
            ops_per_step: 2,
            join_prob: 0.7,
            relabel_prob: 0.35,
            forget_prob: 0.25,
            irredundant_only: false,
            min_edges: 0,
        }
    }
}

impl GeneratorProfile {
    pub fn linear() -> Self {
        GeneratorProfile { shape: Shape::Linear, ..Self::default() }
    }

    /// Many joins and few forgets, so Hamiltonian cycles are common.
    pub fn dense() -> Self {
        GeneratorProfile { ops_per_step: 4, join_prob: 0.9, relabel_prob: 0.3, forget_prob: 0.1, ..Self::default() }
    }

    pub fn irredundant() -> Self {
        GeneratorProfile { irredundant_only: true, ..Self::default() }
    }
}

struct State<'a> {
    rng: ChaCha8Rng,
    k: Label,
    profile: &'a GeneratorProfile,
    b: ExprBuilder,
    labels: Vec<LabelSet>,
    edges: HashSet<(u32, u32)>,
}

struct Frag {
    root: NodeId,
    verts: Vec<u32>,
}

impl State<'_> {
    fn random_label(&mut self) -> Label {
        self.rng.gen_range(1..=self.k)
    }

    fn random_subset(&mut self, min: usize, max: usize) -> LabelSet {
        let mut all: Vec<Label> = (1..=self.k).collect();
        all.shuffle(&mut self.rng);
        let size = self.rng.gen_range(min..=max.min(self.k as usize).max(min));
        all.into_iter().take(size).collect()
    }

    fn present(&self, f: &Frag) -> Vec<Label> {
        let s = f.verts.iter().fold(LabelSet::EMPTY, |s, &v| s.union(self.labels[v as usize]));
        s.iter().collect()
    }

    fn try_join(&mut self, f: &mut Frag) {
        let present = self.present(f);
        if present.len() < 2 {
            return;
        }
        let i = *present.choose(&mut self.rng).expect("non-empty");
        let j = loop {
            let j = *present.choose(&mut self.rng).expect("non-empty");
            if j != i {
                break j;
            }
        };
        let hi: Vec<u32> = f.verts.iter().copied().filter(|&v| self.labels[v as usize].contains(i)).collect();
        let hj: Vec<u32> = f.verts.iter().copied().filter(|&v| self.labels[v as usize].contains(j)).collect();
        if hi.iter().any(|&v| self.labels[v as usize].contains(j)) {
            return;
        }
        let key = |u: u32, v: u32| if u < v { (u, v) } else { (v, u) };
        if self.profile.irredundant_only && hi.iter().any(|&u| hj.iter().any(|&v| self.edges.contains(&key(u, v)))) {
            return;
        }
        for &u in &hi {
            for &v in &hj {
                self.edges.insert(key(u, v));
            }
        }
        f.root = self.b.join(i, j, f.root);
    }

    fn relabel(&mut self, f: &mut Frag) {
        let present = self.present(f);
        let i = match present.choose(&mut self.rng) {
            Some(&i) if self.rng.gen_bool(0.9) => i,
            _ => self.random_label(),
        };
        let to = if self.rng.gen_bool(self.profile.forget_prob) { LabelSet::EMPTY } else { self.random_subset(1, 2) };
        for &v in &f.verts {
            let l = &mut self.labels[v as usize];
            *l = l.relabeled(i, to);
        }
        f.root = self.b.relabel(i, to, f.root);
    }

    fn decorate(&mut self, f: &mut Frag) {
        for _ in 0..self.profile.ops_per_step {
            if self.rng.gen_bool(self.profile.join_prob) {
                self.try_join(f);
            }
            if self.rng.gen_bool(self.profile.relabel_prob) {
                self.relabel(f);
            }
        }
    }

    fn leaf(&mut self, v: u32) -> Frag {
        let max = (self.profile.max_intro_labels.max(1) as usize).min(self.k as usize);
        let ls = self.random_subset(1, max);
        self.labels.push(ls);
        let root = self.b.intro(format!("v{v}"), ls);
        let mut f = Frag { root, verts: vec![v] };
        // A decorated leaf is no longer an Intro child, which linear shapes need.
        if self.profile.shape == Shape::Random && self.rng.gen_bool(self.profile.relabel_prob / 2.0) {
            self.relabel(&mut f);
        }
        f
    }

    fn union(&mut self, a: Frag, c: Frag) -> Frag {
        let (l, r) = if self.rng.gen_bool(0.5) { (a, c) } else { (c, a) };
        let root = self.b.union(l.root, r.root);
        let mut verts = l.verts;
        verts.extend(r.verts);
        let mut f = Frag { root, verts };
        self.decorate(&mut f);
        f
    }
}

/// A random valid expression with exactly `n` Intro leaves named `v0..v{n-1}`
/// and labels in `1..=k`. Deterministic in all arguments.
pub fn gen_random_expr(n: usize, k: Label, seed: u64, profile: &GeneratorProfile) -> Result<MultiExpr, ExprError> {
    if n == 0 || k == 0 || k > crate::label::MAX_LABEL {
        return Err(ExprError::Invalid(format!("generator needs n >= 1 and 1 <= k <= 128, got n={n}, k={k}")));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mixed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ attempt.wrapping_mul(0xD1B5_4A32_D192_ED03);
        let mut st = State {
            rng: ChaCha8Rng::seed_from_u64(mixed),
            k,
            profile,
            b: ExprBuilder::new(),
            labels: Vec::with_capacity(n),
            edges: HashSet::new(),
        };
        let mut frags: Vec<Frag> = (0..n as u32).map(|v| st.leaf(v)).collect();
        let root = match profile.shape {
            Shape::Random => {
                while frags.len() > 1 {
                    let a = frags.swap_remove(st.rng.gen_range(0..frags.len()));
                    let c = frags.swap_remove(st.rng.gen_range(0..frags.len()));
                    let u = st.union(a, c);
                    frags.push(u);
                }
                frags.pop().expect("n >= 1").root
            }
            Shape::Linear => {
                let mut rest = frags.into_iter();
                let mut acc = rest.next().expect("n >= 1");
                for leaf in rest {
                    acc = st.union(acc, leaf);
                }
                acc.root
            }
        };
        if st.edges.len() >= profile.min_edges {
            return st.b.finish(root, Some(k));
        }
    }
    Err(ExprError::GenerationFailed { attempts: MAX_ATTEMPTS as u32 })
}
