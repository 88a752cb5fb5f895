//! Independent brute-force ground truth: closed-polygon enumeration over the
//! GF(2) cycle space, corner-path cosets, direct spin sums, and perfect
//! matchings. Everything here is deliberately separate from the closed forms
//! and recursions it validates.

use std::collections::{BTreeMap, VecDeque};

use rug::Integer;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, LabeledMultigraph};
use crate::poly::LaurentPoly;

pub const DEFAULT_RANK_BUDGET: u32 = 24;
pub const DEFAULT_SPIN_BUDGET: usize = 20;
pub const DEFAULT_MATCHING_BUDGET: usize = 80;

/// How enumerated edge subsets are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    /// One variable z; weight z^(subset size).
    Univariate,
    /// One variable per edge label.
    ByLabel,
}

/// Bitset over the loopless edge list.
#[derive(Clone, PartialEq, Eq)]
struct EdgeSet {
    bits: Vec<u64>,
}

impl EdgeSet {
    fn new(nbits: usize) -> Self {
        EdgeSet {
            bits: vec![0; nbits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] ^= 1 << (i % 64);
    }

    fn xor_in(&mut self, other: &EdgeSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

struct CycleBasis {
    /// Loopless edge ids in enumeration order.
    edge_ids: Vec<usize>,
    /// Fundamental cycles as bitsets over positions in `edge_ids`.
    cycles: Vec<EdgeSet>,
}

/// Spanning-tree cycle basis. BFS from vertex 0, which is the
/// lexicographically least vertex for every graph built in this crate.
fn cycle_basis(g: &LabeledMultigraph, rank_budget: u32) -> Result<CycleBasis> {
    let edge_ids: Vec<usize> = g.loopless_edges().map(|(i, _)| i).collect();
    let n = g.vertex_count();
    let m = edge_ids.len();
    let rank = g.cycle_space_rank().rank;
    if rank > rank_budget {
        return Err(Error::BudgetExceeded {
            what: "cycle-space rank",
            required: rank as u64,
            budget: rank_budget as u64,
        });
    }

    // Adjacency over loopless edges, by position in edge_ids.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (pos, &ei) in edge_ids.iter().enumerate() {
        let e = &g.edges[ei];
        adj[e.u].push((e.v, pos));
        adj[e.v].push((e.u, pos));
    }

    let mut parent_edge: Vec<Option<usize>> = vec![None; n]; // position of tree edge to parent
    let mut parent: Vec<usize> = (0..n).collect();
    let mut in_tree = vec![false; m];
    let mut visited = vec![false; n];
    let mut order = VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        order.push_back(root);
        while let Some(u) = order.pop_front() {
            for &(v, pos) in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = u;
                    parent_edge[v] = Some(pos);
                    in_tree[pos] = true;
                    order.push_back(v);
                }
            }
        }
    }

    // Path-to-root bitsets, memoized per vertex on demand.
    let path_to_root = |mut v: usize| -> EdgeSet {
        let mut set = EdgeSet::new(m);
        while let Some(pe) = parent_edge[v] {
            set.set(pe);
            v = parent[v];
        }
        set
    };

    let mut cycles = Vec::with_capacity(rank as usize);
    for (pos, &ei) in edge_ids.iter().enumerate() {
        if in_tree[pos] {
            continue;
        }
        let e = &g.edges[ei];
        let mut c = path_to_root(e.u);
        c.xor_in(&path_to_root(e.v));
        c.set(pos);
        cycles.push(c);
    }
    debug_assert_eq!(cycles.len(), rank as usize);
    Ok(CycleBasis { edge_ids, cycles })
}

fn weight_vars(g: &LabeledMultigraph, weighting: Weighting) -> Vec<String> {
    match weighting {
        Weighting::Univariate => vec!["z".to_string()],
        Weighting::ByLabel => g.labels().iter().map(|c| c.to_string()).collect(),
    }
}

/// Exponent slot per edge position.
fn edge_var_slots(
    g: &LabeledMultigraph,
    edge_ids: &[usize],
    vars: &[String],
    weighting: Weighting,
) -> Vec<usize> {
    edge_ids
        .iter()
        .map(|&ei| match weighting {
            Weighting::Univariate => 0,
            Weighting::ByLabel => {
                let label = g.edges[ei].label.to_string();
                vars.iter().position(|v| *v == label).unwrap()
            }
        })
        .collect()
}

/// Enumerates all closed polygons (even-degree edge subsets) and returns
/// their generating function. Gray-code order over the fundamental-cycle
/// combinations keeps each step a single basis XOR.
pub fn enumerate_polygons(
    g: &LabeledMultigraph,
    weighting: Weighting,
    rank_budget: u32,
) -> Result<LaurentPoly> {
    enumerate_coset(g, weighting, rank_budget, None)
}

/// Which pair of corner vertices a path coset joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerPair {
    LeftRight,
    LeftUp,
    RightUp,
}

impl CornerPair {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lr" => Ok(CornerPair::LeftRight),
            "lu" => Ok(CornerPair::LeftUp),
            "ru" => Ok(CornerPair::RightUp),
            _ => Err(Error::InvalidParams(format!("unknown corner pair {s}"))),
        }
    }
}

/// Enumerates the edge subsets with odd degree exactly at the two chosen
/// corners: the affine coset P0 + cycle space, where P0 is any fixed
/// corner-to-corner path. Its generating function is the Upsilon of the
/// corner pair.
pub fn enumerate_corner_paths(
    g: &LabeledMultigraph,
    pair: CornerPair,
    weighting: Weighting,
    rank_budget: u32,
) -> Result<LaurentPoly> {
    let corners = g.corners.ok_or_else(|| Error::FamilyMismatch {
        expected: "a graph with designated corners (hanoi or sierpinski)".into(),
        found: g.family.name().into(),
    })?;
    let [l, u, r] = corners;
    let (s, t) = match pair {
        CornerPair::LeftRight => (l, r),
        CornerPair::LeftUp => (l, u),
        CornerPair::RightUp => (r, u),
    };
    enumerate_coset(g, weighting, rank_budget, Some((s, t)))
}

fn enumerate_coset(
    g: &LabeledMultigraph,
    weighting: Weighting,
    rank_budget: u32,
    endpoints: Option<(usize, usize)>,
) -> Result<LaurentPoly> {
    let basis = cycle_basis(g, rank_budget)?;
    let m = basis.edge_ids.len();
    let vars = weight_vars(g, weighting);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let slots = edge_var_slots(g, &basis.edge_ids, &vars, weighting);

    let mut current = EdgeSet::new(m);
    if let Some((s, t)) = endpoints {
        current = bfs_path(g, &basis.edge_ids, s, t)?;
    }

    let mut exps: Vec<i32> = vec![0; vars.len()];
    let mut in_subset = vec![false; m];
    for pos in current.iter_ones() {
        in_subset[pos] = true;
        exps[slots[pos]] += 1;
    }

    let mut acc = LaurentPoly::zero(&var_refs);
    let mut poly_terms: BTreeMap<Vec<i32>, Integer> = BTreeMap::new();
    *poly_terms.entry(exps.clone()).or_default() += 1;

    let r = basis.cycles.len();
    let total: u64 = 1u64 << r;
    let mut gray_prev = 0u64;
    for i in 1..total {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        for pos in basis.cycles[flipped].iter_ones() {
            if in_subset[pos] {
                exps[slots[pos]] -= 1;
            } else {
                exps[slots[pos]] += 1;
            }
            in_subset[pos] = !in_subset[pos];
            current.set(pos);
        }
        *poly_terms.entry(exps.clone()).or_default() += 1;
    }

    for (e, c) in poly_terms {
        let mono = monomial_from_exps(&var_refs, &e, c);
        acc = acc.add(&mono);
    }
    Ok(acc)
}

fn monomial_from_exps(vars: &[&str], exps: &[i32], c: Integer) -> LaurentPoly {
    let mut p = LaurentPoly::constant(vars, c);
    for (i, &e) in exps.iter().enumerate() {
        if e != 0 {
            p = p.mul(&LaurentPoly::monomial(vars, vars[i], e, 1));
        }
    }
    p
}

/// Any path between two vertices, as an edge bitset over positions.
fn bfs_path(g: &LabeledMultigraph, edge_ids: &[usize], s: usize, t: usize) -> Result<EdgeSet> {
    let n = g.vertex_count();
    let m = edge_ids.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (pos, &ei) in edge_ids.iter().enumerate() {
        let e = &g.edges[ei];
        adj[e.u].push((e.v, pos));
        adj[e.v].push((e.u, pos));
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    visited[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        for &(v, pos) in &adj[u] {
            if !visited[v] {
                visited[v] = true;
                prev[v] = Some((u, pos));
                queue.push_back(v);
            }
        }
    }
    if !visited[t] {
        return Err(Error::Domain("corner vertices are not connected".into()));
    }
    let mut set = EdgeSet::new(m);
    let mut cur = t;
    while cur != s {
        let (p, pos) = prev[cur].unwrap();
        set.set(pos);
        cur = p;
    }
    Ok(set)
}

/// Coupling layout for a spin sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinWeighting {
    /// One variable y = exp(beta J).
    Uniform,
    /// One variable y_<label> per edge label.
    PerLabel,
}

/// Direct sum over all 2^N spin configurations. Returns Z as an exact
/// Laurent polynomial in y (or per-label y_s). Parallel edges contribute once
/// per edge; loops are excluded.
pub fn spin_sum_partition(
    g: &LabeledMultigraph,
    weighting: SpinWeighting,
    vertex_budget: usize,
) -> Result<LaurentPoly> {
    let n = g.vertex_count();
    if n > vertex_budget {
        return Err(Error::BudgetExceeded {
            what: "spin-sum vertices",
            required: n as u64,
            budget: vertex_budget as u64,
        });
    }
    let labels = g.labels();
    let vars: Vec<String> = match weighting {
        SpinWeighting::Uniform => vec!["y".to_string()],
        SpinWeighting::PerLabel => labels.iter().map(|c| format!("y_{c}")).collect(),
    };
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(usize, usize, usize)> = g
        .loopless_edges()
        .map(|(_, e)| {
            let slot = match weighting {
                SpinWeighting::Uniform => 0,
                SpinWeighting::PerLabel => labels.iter().position(|&l| l == e.label).unwrap(),
            };
            (e.u, e.v, slot)
        })
        .collect();

    let mut terms: BTreeMap<Vec<i32>, Integer> = BTreeMap::new();
    for config in 0u64..(1u64 << n) {
        let mut exps = vec![0i32; vars.len()];
        for &(u, v, slot) in &edges {
            let su = (config >> u) & 1;
            let sv = (config >> v) & 1;
            exps[slot] += if su == sv { 1 } else { -1 };
        }
        *terms.entry(exps).or_default() += 1;
    }

    let mut acc = LaurentPoly::zero(&var_refs);
    for (e, c) in terms {
        acc = acc.add(&monomial_from_exps(&var_refs, &e, c));
    }
    Ok(acc)
}

/// Perfect-matching generating function by backtracking, always extending
/// the lowest-index unmatched vertex. Edge weights: e-marked edges take the
/// polynomial their label maps to; all other edges weigh 1.
pub fn enumerate_perfect_matchings(
    g: &LabeledMultigraph,
    e_weights: &BTreeMap<char, LaurentPoly>,
    vertex_budget: usize,
) -> Result<LaurentPoly> {
    let n = g.vertex_count();
    if n > vertex_budget {
        return Err(Error::BudgetExceeded {
            what: "matching vertices",
            required: n as u64,
            budget: vertex_budget as u64,
        });
    }
    let mut vars: Vec<String> = Vec::new();
    for p in e_weights.values() {
        for v in p.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    vars.sort();
    if vars.is_empty() {
        vars.push("z".to_string());
    }
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();

    if n % 2 == 1 {
        // Odd vertex count: no perfect matchings.
        return Ok(LaurentPoly::zero(&var_refs));
    }

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ei, e) in g.loopless_edges() {
        adj[e.u].push((e.v, ei));
        adj[e.v].push((e.u, ei));
    }
    let weights: Vec<Option<LaurentPoly>> = g
        .edges
        .iter()
        .map(|e| {
            if e.kind == EdgeKind::EMarker {
                Some(
                    e_weights
                        .get(&e.label)
                        .cloned()
                        .unwrap_or_else(|| LaurentPoly::one(&var_refs))
                        .embed(&vars),
                )
            } else {
                None
            }
        })
        .collect();

    let mut matched = vec![false; n];
    let mut acc = LaurentPoly::zero(&var_refs);
    let mut partial = LaurentPoly::one(&var_refs);
    backtrack(&adj, &weights, &mut matched, &mut partial, &mut acc);
    Ok(acc)
}

fn backtrack(
    adj: &[Vec<(usize, usize)>],
    weights: &[Option<LaurentPoly>],
    matched: &mut Vec<bool>,
    partial: &mut LaurentPoly,
    acc: &mut LaurentPoly,
) {
    let Some(u) = matched.iter().position(|&m| !m) else {
        *acc = acc.add(partial);
        return;
    };
    matched[u] = true;
    for &(v, ei) in &adj[u] {
        if matched[v] {
            continue;
        }
        matched[v] = true;
        match &weights[ei] {
            Some(w) => {
                let saved = partial.clone();
                *partial = partial.mul(w);
                backtrack(adj, weights, matched, partial, acc);
                *partial = saved;
            }
            None => backtrack(adj, weights, matched, partial, acc),
        }
        matched[v] = false;
    }
    matched[u] = false;
}

/// Shorthand: matchings weighted z per e-edge, 1 elsewhere.
pub fn matching_gf_univariate(g: &LabeledMultigraph, vertex_budget: usize) -> Result<LaurentPoly> {
    let z = LaurentPoly::var(&["z"], "z");
    let mut weights = BTreeMap::new();
    for label in g.labels() {
        weights.insert(label, z.clone());
    }
    // Labels occurring only on e-edges still need a weight entry.
    for e in &g.edges {
        if e.kind == EdgeKind::EMarker {
            weights.entry(e.label).or_insert_with(|| z.clone());
        }
    }
    enumerate_perfect_matchings(g, &weights, vertex_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_schreier, contract_to_sierpinski, Edge, GraphLabeling};
    use crate::group::Family;

    fn z_poly_pairs(pairs: &[(i32, i64)]) -> LaurentPoly {
        pairs
            .iter()
            .fold(LaurentPoly::zero(&["z"]), |acc, &(e, c)| {
                acc.add(&LaurentPoly::monomial(&["z"], "z", e, c))
            })
    }

    #[test]
    fn grigorchuk_level2_polygons() {
        let g = build_schreier(Family::Grigorchuk, 2).unwrap();
        let gf = enumerate_polygons(&g, Weighting::Univariate, 24).unwrap();
        assert_eq!(gf, z_poly_pairs(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn basilica_level1_polygons() {
        let g = build_schreier(Family::Basilica, 1).unwrap();
        let gf = enumerate_polygons(&g, Weighting::Univariate, 24).unwrap();
        assert_eq!(gf, z_poly_pairs(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn hanoi_level2_polygon_count() {
        let g = build_schreier(Family::Hanoi, 2).unwrap();
        let gf = enumerate_polygons(&g, Weighting::Univariate, 24).unwrap();
        assert_eq!(gf.at_ones(), 16);
        assert_eq!(gf.constant_term(), 1);
    }

    #[test]
    fn polygon_count_is_two_to_rank() {
        for (family, n) in [
            (Family::Grigorchuk, 4u32),
            (Family::Basilica, 4),
            (Family::Hanoi, 2),
        ] {
            let g = build_schreier(family, n).unwrap();
            let gf = enumerate_polygons(&g, Weighting::Univariate, 24).unwrap();
            let rank = g.cycle_space_rank().rank;
            assert_eq!(gf.at_ones(), Integer::from(1) << rank);
        }
    }

    #[test]
    fn rank_budget_refusal() {
        let g = build_schreier(Family::Grigorchuk, 5).unwrap();
        let err = enumerate_polygons(&g, Weighting::Univariate, 4).unwrap_err();
        match err {
            Error::BudgetExceeded {
                required, budget, ..
            } => {
                assert_eq!(required, 15);
                assert_eq!(budget, 4);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn hanoi_level1_corner_paths() {
        let g = build_schreier(Family::Hanoi, 1).unwrap();
        let lr =
            enumerate_corner_paths(&g, CornerPair::LeftRight, Weighting::Univariate, 24).unwrap();
        assert_eq!(lr, z_poly_pairs(&[(1, 1), (2, 1)]));
        // Weighted lu: a + bc, with corner pair (0, 1).
        let lu = enumerate_corner_paths(&g, CornerPair::LeftUp, Weighting::ByLabel, 24).unwrap();
        let vars = ["a", "b", "c"];
        let expect = LaurentPoly::var(&vars, "a")
            .add(&LaurentPoly::var(&vars, "b").mul(&LaurentPoly::var(&vars, "c")));
        assert_eq!(lu, expect);
        let ru = enumerate_corner_paths(&g, CornerPair::RightUp, Weighting::ByLabel, 24).unwrap();
        let expect_ru = LaurentPoly::var(&vars, "c")
            .add(&LaurentPoly::var(&vars, "a").mul(&LaurentPoly::var(&vars, "b")));
        assert_eq!(ru, expect_ru);
    }

    #[test]
    fn hanoi_level2_coset_size() {
        let g = build_schreier(Family::Hanoi, 2).unwrap();
        let lr =
            enumerate_corner_paths(&g, CornerPair::LeftRight, Weighting::Univariate, 24).unwrap();
        assert_eq!(lr.at_ones(), 16);
    }

    #[test]
    fn sierpinski_corner_paths_exist() {
        let omega = contract_to_sierpinski(&build_schreier(Family::Hanoi, 2).unwrap()).unwrap();
        let lr = enumerate_corner_paths(&omega, CornerPair::LeftRight, Weighting::Univariate, 24)
            .unwrap();
        assert_eq!(lr.at_ones(), 16);
    }

    #[test]
    fn rotation_fixture_cosets_match_upsilon() {
        // On the rotation-invariant fixtures the three corner cosets carry
        // the same generating function, and it equals the recursion's
        // auxiliary function.
        use crate::genfun;
        for n in 2..=3u32 {
            let fixture = crate::graph::build_rotation_invariant_omega(n).unwrap();
            let upsilon =
                genfun::sierpinski_gamma_rotation_invariant(n).unwrap().aux["upsilon"].clone();
            for pair in [
                CornerPair::LeftRight,
                CornerPair::LeftUp,
                CornerPair::RightUp,
            ] {
                let coset = enumerate_corner_paths(&fixture, pair, Weighting::ByLabel, 24).unwrap();
                assert_eq!(coset, upsilon, "level {n} pair {pair:?}");
            }
        }
    }

    #[test]
    fn hanoi_level3_weighted_cosets_match_system() {
        use crate::genfun;
        let g = build_schreier(Family::Hanoi, 3).unwrap();
        let w = genfun::hanoi_gamma_weighted(3).unwrap();
        for (pair, key) in [
            (CornerPair::LeftRight, "upsilon_lr"),
            (CornerPair::LeftUp, "upsilon_lu"),
            (CornerPair::RightUp, "upsilon_ru"),
        ] {
            let coset = enumerate_corner_paths(&g, pair, Weighting::ByLabel, 24).unwrap();
            assert_eq!(coset, w.aux[key], "{key}");
        }
    }

    #[test]
    fn spin_sum_single_edge() {
        let g = build_schreier(Family::Grigorchuk, 1).unwrap();
        let zs = spin_sum_partition(&g, SpinWeighting::Uniform, 20).unwrap();
        let expect = LaurentPoly::monomial(&["y"], "y", 1, 2).add(&LaurentPoly::monomial(
            &["y"],
            "y",
            -1,
            2,
        ));
        assert_eq!(zs, expect);
    }

    #[test]
    fn spin_sum_hanoi_triangle() {
        let g = build_schreier(Family::Hanoi, 1).unwrap();
        let zs = spin_sum_partition(&g, SpinWeighting::Uniform, 20).unwrap();
        let expect = LaurentPoly::monomial(&["y"], "y", 3, 2).add(&LaurentPoly::monomial(
            &["y"],
            "y",
            -1,
            6,
        ));
        assert_eq!(zs, expect);
    }

    #[test]
    fn spin_budget_refusal() {
        let g = build_schreier(Family::Hanoi, 3).unwrap();
        assert!(matches!(
            spin_sum_partition(&g, SpinWeighting::Uniform, 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    fn path_graph(n: usize) -> LabeledMultigraph {
        LabeledMultigraph {
            family: Family::Sierpinski,
            level: 1,
            labeling: GraphLabeling::Fisher,
            vertex_names: (0..n).map(|i| format!("p{i}")).collect(),
            words: None,
            edges: (0..n - 1)
                .map(|i| Edge {
                    u: i,
                    v: i + 1,
                    label: 'a',
                    kind: EdgeKind::Normal,
                    triangle: None,
                })
                .collect(),
            corners: None,
        }
    }

    #[test]
    fn single_edge_has_one_matching() {
        let g = path_graph(2);
        let gf = matching_gf_univariate(&g, 80).unwrap();
        assert_eq!(gf.at_ones(), 1);
    }

    #[test]
    fn odd_vertex_count_has_no_matchings() {
        let g = path_graph(3);
        let gf = matching_gf_univariate(&g, 80).unwrap();
        assert!(gf.is_zero());
    }

    #[test]
    fn matching_budget_refusal() {
        let g = path_graph(10);
        assert!(matches!(
            matching_gf_univariate(&g, 8),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn disconnected_rank_is_flagged() {
        // Two disjoint triangles: rank = 6 - 6 + 2 = 2, components = 2, and
        // the polygon count is still 2^rank.
        let mut edges = Vec::new();
        for base in [0usize, 3] {
            for i in 0..3 {
                edges.push(Edge {
                    u: base + i,
                    v: base + (i + 1) % 3,
                    label: 'a',
                    kind: EdgeKind::Normal,
                    triangle: None,
                });
            }
        }
        let g = LabeledMultigraph {
            family: Family::Sierpinski,
            level: 1,
            labeling: GraphLabeling::Fisher,
            vertex_names: (0..6).map(|i| format!("t{i}")).collect(),
            words: None,
            edges,
            corners: None,
        };
        let r = g.cycle_space_rank();
        assert_eq!(r.rank, 2);
        assert_eq!(r.components, 2);
        let gf = enumerate_polygons(&g, Weighting::Univariate, 24).unwrap();
        assert_eq!(gf.at_ones(), 4);
    }

    #[test]
    fn hexagon_with_alternating_e_edges() {
        // 6-cycle, alternating e-edges: exactly the two alternating matchings.
        let mut edges = Vec::new();
        for i in 0..6 {
            edges.push(Edge {
                u: i,
                v: (i + 1) % 6,
                label: 'a',
                kind: if i % 2 == 0 {
                    EdgeKind::EMarker
                } else {
                    EdgeKind::Normal
                },
                triangle: None,
            });
        }
        let g = LabeledMultigraph {
            family: Family::Sierpinski,
            level: 1,
            labeling: GraphLabeling::Fisher,
            vertex_names: (0..6).map(|i| format!("h{i}")).collect(),
            words: None,
            edges,
            corners: None,
        };
        let gf = matching_gf_univariate(&g, 80).unwrap();
        assert_eq!(gf, z_poly_pairs(&[(0, 1), (3, 1)]));
    }
}
