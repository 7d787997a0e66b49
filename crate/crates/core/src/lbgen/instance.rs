//! The Max Cut instance graph, built directly from its definition.

use serde::Serialize;

use crate::graph::{GraphBuilder, SimpleGraph};

use super::gadgets::{add_f, add_fprime, add_hif};
use super::mis::MisInstance;
use super::names;
use super::params::ReductionParams;
use super::{LbError, LbOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VertexRole {
    Anchor,
    A { set: u64, i: usize, j: usize },
    B { set: u64, i: usize, j: usize },
    Z { slot: usize, j: usize },
    Gadget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetKind {
    F,
    FPrime,
    Hif { slot: usize, alpha: usize, t: usize },
}

/// A gadget that is not part of a larger gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OuterGadget {
    #[serde(flatten)]
    pub kind: GadgetKind,
    pub name: String,
    pub endpoints: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct LbInstance {
    /// The input after padding.
    pub mis: MisInstance,
    pub params: ReductionParams,
    pub graph: SimpleGraph,
    /// Role of each vertex, by vertex index.
    pub roles: Vec<VertexRole>,
    pub gadgets: Vec<OuterGadget>,
}

impl LbInstance {
    /// Edges with both endpoints among the `A` and `B` vertices.
    pub fn selection_edge_count(&self) -> usize {
        let sel = |v: usize| matches!(self.roles[v], VertexRole::A { .. } | VertexRole::B { .. });
        self.graph.edges().filter(|&(u, v)| sel(u) && sel(v)).count()
    }

    pub fn outer_count(&self, kind: fn(&GadgetKind) -> bool) -> usize {
        self.gadgets.iter().filter(|g| kind(&g.kind)).count()
    }
}

pub(crate) fn checked_params(mis: &MisInstance, opts: &LbOptions) -> Result<(MisInstance, ReductionParams), LbError> {
    let padded = mis.padded();
    let params = ReductionParams::new(&padded, opts.c_override, opts.d_override)?;
    let predicted = params.predicted_vertices();
    if predicted > opts.max_vertices {
        return Err(LbError::InstanceTooLarge { predicted, cap: opts.max_vertices });
    }
    Ok((padded, params))
}

struct Build {
    g: GraphBuilder,
    roles: Vec<(usize, VertexRole)>,
    gadgets: Vec<OuterGadget>,
}

impl Build {
    fn vertex(&mut self, name: String, role: VertexRole) -> Result<usize, LbError> {
        let v = self.g.add_vertex(name)?;
        self.roles.push((v, role));
        Ok(v)
    }

    fn outer(&mut self, kind: GadgetKind, name: &str, endpoints: &[usize]) {
        let endpoints = endpoints.iter().map(|&v| self.g_id(v)).collect();
        self.gadgets.push(OuterGadget { kind, name: name.to_string(), endpoints });
    }

    fn g_id(&self, v: usize) -> String {
        self.g.id(v).to_string()
    }
}

pub fn build_instance(mis: &MisInstance, opts: &LbOptions) -> Result<LbInstance, LbError> {
    let (mis, p) = checked_params(mis, opts)?;
    let (n, c, d) = (p.n, p.c as usize, p.d as usize);
    let mut b = Build { g: GraphBuilder::new(), roles: Vec::new(), gadgets: Vec::new() };

    let d1 = b.vertex(names::D1.into(), VertexRole::Anchor)?;
    let d2 = b.vertex(names::D2.into(), VertexRole::Anchor)?;
    let d2p = b.vertex(names::D2P.into(), VertexRole::Anchor)?;
    add_fprime(&mut b.g, names::ANCHOR_FPRIME, d1, d2, c)?;
    b.outer(GadgetKind::FPrime, names::ANCHOR_FPRIME, &[d1, d2]);
    add_f(&mut b.g, names::ANCHOR_F, d2p, d2, c)?;
    b.outer(GadgetKind::F, names::ANCHOR_F, &[d2p, d2]);

    let sets: Vec<u64> = p.family.iter().chain(&p.co_family).copied().collect();
    let full = (1u64 << p.k) - 1;
    // a_idx[j-1][set position][i-1]
    let mut a_idx = vec![vec![vec![0usize; n]; sets.len()]; p.m];
    let mut b_idx = vec![vec![vec![0usize; n]; sets.len()]; p.m];
    for j in 1..=p.m {
        for (s, &set) in sets.iter().enumerate() {
            for i in 1..=n {
                a_idx[j - 1][s][i - 1] = b.vertex(names::a(set, i, j), VertexRole::A { set, i, j })?;
                b_idx[j - 1][s][i - 1] = b.vertex(names::b(set, i, j), VertexRole::B { set, i, j })?;
            }
        }
        let copy_a = &a_idx[j - 1];
        let copy_b = &b_idx[j - 1];
        // Cliques on each A_S(j) and B_S(j).
        for group in copy_a.iter().chain(copy_b) {
            for x in 0..n {
                for y in x + 1..n {
                    b.g.add_edge_idx(group[x], group[y])?;
                }
            }
        }
        // A_S(j) is complete to B_T(j) unless T is the complement of S.
        for (s, &set) in sets.iter().enumerate() {
            for (t, &other) in sets.iter().enumerate() {
                if other == full & !set {
                    continue;
                }
                for &u in &copy_a[s] {
                    for &v in &copy_b[t] {
                        b.g.add_edge_idx(u, v)?;
                    }
                }
            }
        }
        for (s, &set) in p.family.iter().enumerate() {
            let co = sets.iter().position(|&x| x == full & !set).expect("complement is in the family");
            for i in 1..=n {
                let name = names::pair_fprime(set, i, j);
                let (u, v) = (copy_a[s][i - 1], copy_a[co][i - 1]);
                add_fprime(&mut b.g, &name, u, v, c)?;
                b.outer(GadgetKind::FPrime, &name, &[u, v]);
            }
        }
    }
    for j in 1..p.m {
        for (s, &set) in sets.iter().enumerate() {
            for i in 1..=n {
                let name = names::link_fprime(set, i, j);
                let (u, v) = (b_idx[j - 1][s][i - 1], a_idx[j][s][i - 1]);
                add_fprime(&mut b.g, &name, u, v, c)?;
                b.outer(GadgetKind::FPrime, &name, &[u, v]);
            }
        }
    }
    for (jj, cp) in p.copies.iter().enumerate() {
        let j = jj + 1;
        let mut zs = Vec::with_capacity(cp.slots.len());
        for sg in &cp.slots {
            let slot = sg.slot.index();
            let z = b.vertex(names::z(slot, j), VertexRole::Z { slot, j })?;
            zs.push(z);
            let s = sets.iter().position(|&x| x == sg.attached_set).expect("attached set is in the family");
            let xs = a_idx[jj][s].clone();
            let name = names::hif(slot, j);
            add_hif(&mut b.g, &name, sg.alpha, &xs, d2, z, n, d, c)?;
            let mut ends = xs;
            ends.extend([d2, z]);
            b.outer(GadgetKind::Hif { slot, alpha: sg.alpha, t: n }, &name, &ends);
        }
        let zc = zs.len();
        let name = names::hif(5, j);
        add_hif(&mut b.g, &name, zc - 1, &zs, d2, d2p, n, d, c)?;
        let mut ends = zs;
        ends.extend([d2, d2p]);
        b.outer(GadgetKind::Hif { slot: 5, alpha: zc - 1, t: zc }, &name, &ends);
    }

    let graph = b.g.build();
    let mut roles = vec![VertexRole::Gadget; graph.n()];
    for (v, r) in b.roles {
        roles[v] = r;
    }
    Ok(LbInstance { mis, params: p, graph, roles, gadgets: b.gadgets })
}
