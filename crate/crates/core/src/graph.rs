//! Labeled multigraphs: Schreier graphs of the three groups, Sierpinski
//! graphs obtained by contraction, the rotation-invariant fixtures, and the
//! structural queries (census, cycle-space rank, degrees, exports).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{Family, GroupTable, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Normal,
    Loop,
    EMarker,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Normal => "normal",
            EdgeKind::Loop => "loop",
            EdgeKind::EMarker => "e",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: char,
    pub kind: EdgeKind,
    /// Suffix word of the elementary triangle this edge belongs to, kept by
    /// the Hanoi builder and the contraction; drives the Fisher leg pairing.
    pub(crate) triangle: Option<Word>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        matches!(self.kind, EdgeKind::Loop)
    }
}

/// Which labeling a graph carries, for provenance in exports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphLabeling {
    Schreier,
    RotationInvariant,
    Fisher,
}

impl GraphLabeling {
    pub fn as_str(&self) -> &'static str {
        match self {
            GraphLabeling::Schreier => "schreier",
            GraphLabeling::RotationInvariant => "rotation-invariant",
            GraphLabeling::Fisher => "fisher",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LabeledMultigraph {
    pub family: Family,
    pub level: u32,
    pub labeling: GraphLabeling,
    pub vertex_names: Vec<String>,
    /// Word annotation per vertex where the graph comes from a group action
    /// (Schreier graphs and contractions keep the representative word).
    pub words: Option<Vec<Word>>,
    pub edges: Vec<Edge>,
    /// (left, up, right) corner vertex ids where meaningful.
    pub corners: Option<[usize; 3]>,
}

impl LabeledMultigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn loopless_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(|(_, e)| !e.is_loop())
    }

    pub fn loopless_edge_count(&self) -> usize {
        self.loopless_edges().count()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_loop()).count()
    }

    /// Loopless degree per vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count()];
        for (_, e) in self.loopless_edges() {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Distinct labels present on loopless edges, sorted.
    pub fn labels(&self) -> Vec<char> {
        let mut ls: Vec<char> = self.loopless_edges().map(|(_, e)| e.label).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    pub fn label_edge_counts(&self) -> BTreeMap<char, usize> {
        let mut m = BTreeMap::new();
        for (_, e) in self.loopless_edges() {
            *m.entry(e.label).or_insert(0) += 1;
        }
        m
    }

    pub fn connected_components(&self) -> usize {
        let mut dsu = Dsu::new(self.vertex_count());
        for (_, e) in self.loopless_edges() {
            dsu.union(e.u, e.v);
        }
        let mut roots: Vec<usize> = (0..self.vertex_count()).map(|v| dsu.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.connected_components() == 1
    }

    /// Rank of the GF(2) cycle space on the loopless view.
    pub fn cycle_space_rank(&self) -> CycleSpaceRank {
        let components = self.connected_components();
        let e = self.loopless_edge_count() as i64;
        let v = self.vertex_count() as i64;
        CycleSpaceRank {
            rank: (e - v + components as i64).max(0) as u32,
            components,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "u": self.vertex_names[e.u],
                    "v": self.vertex_names[e.v],
                    "label": e.label.to_string(),
                    "kind": e.kind.as_str(),
                })
            })
            .collect();
        serde_json::json!({
            "family": self.family.name(),
            "level": self.level,
            "labeling": self.labeling.as_str(),
            "vertices": self.vertex_names,
            "edges": edges,
        })
    }

    pub fn to_dot(&self, include_loops: bool) -> String {
        let mut out = String::from("graph {\n");
        for (i, name) in self.vertex_names.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{name}\"];\n"));
        }
        for e in &self.edges {
            if e.is_loop() && !include_loops {
                continue;
            }
            let style = match e.kind {
                EdgeKind::EMarker => ", style=dashed",
                EdgeKind::Loop => ", style=dotted",
                EdgeKind::Normal => "",
            };
            out.push_str(&format!(
                "  v{} -- v{} [label=\"{}\"{}];\n",
                e.u, e.v, e.label, style
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleSpaceRank {
    pub rank: u32,
    /// 1 for all graphs built here; exposed so disconnected inputs are flagged.
    pub components: usize,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index wins so representatives are lexicographically least.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Builds the level-n Schreier graph of the family's group.
///
/// Involutive generators contribute one undirected edge per 2-orbit;
/// non-involutive generators contribute one edge per moved vertex, so their
/// 2-orbits appear as parallel edges (the Basilica double edges). Fixed
/// points become loop edges, flagged but retained.
pub fn build_schreier(family: Family, n: u32) -> Result<LabeledMultigraph> {
    if n < 1 {
        return Err(Error::UnsupportedLevel {
            level: n,
            reason: "level must be at least 1".into(),
        });
    }
    let table = GroupTable::for_family(family)?;
    table.validate()?;
    let q = table.q;
    let count = q.checked_pow(n).ok_or(Error::UnsupportedLevel {
        level: n,
        reason: "level too large".into(),
    })?;
    let words: Vec<Word> = (0..count)
        .map(|i| Word::from_index(i, q, n as usize))
        .collect();
    let vertex_names = words.iter().map(|w| w.to_string()).collect();

    let mut edges = Vec::new();
    for (g, def) in table.generators.iter().enumerate() {
        let involution = table.is_involution(g);
        for (u, w) in words.iter().enumerate() {
            let img = table.apply(g, w);
            let v = img.index(q);
            let triangle = if q == 3 && differs_only_in_first_letter(w, &img) {
                Some(Word(w.0[1..].to_vec()))
            } else {
                None
            };
            if v == u {
                edges.push(Edge {
                    u,
                    v,
                    label: def.name,
                    kind: EdgeKind::Loop,
                    triangle: None,
                });
            } else if !involution || u < v {
                edges.push(Edge {
                    u,
                    v,
                    label: def.name,
                    kind: EdgeKind::Normal,
                    triangle,
                });
            }
        }
    }

    Ok(LabeledMultigraph {
        family,
        level: n,
        labeling: GraphLabeling::Schreier,
        vertex_names,
        words: Some(words),
        edges,
        corners: match family {
            Family::Hanoi => Some([
                Word::repeated(0, n as usize).index(q),
                Word::repeated(1, n as usize).index(q),
                Word::repeated(2, n as usize).index(q),
            ]),
            _ => None,
        },
    })
}

fn differs_only_in_first_letter(a: &Word, b: &Word) -> bool {
    a.0[0] != b.0[0] && a.0[1..] == b.0[1..]
}

/// Contracts a Hanoi Schreier graph to the Sierpinski graph Omega_n.
///
/// Every non-loop edge whose endpoint words differ at any position >= 2 is
/// contracted; the surviving elementary-triangle edges keep their generator
/// labels (the "Schreier" labeling). Merged vertices take the
/// lexicographically smallest word as representative.
pub fn contract_to_sierpinski(g: &LabeledMultigraph) -> Result<LabeledMultigraph> {
    if g.family != Family::Hanoi {
        return Err(Error::FamilyMismatch {
            expected: "hanoi".into(),
            found: g.family.name().into(),
        });
    }
    let words = g.words.as_ref().ok_or_else(|| {
        Error::ConstructionTable("contraction needs word-annotated vertices".into())
    })?;

    let mut dsu = Dsu::new(g.vertex_count());
    for (_, e) in g.loopless_edges() {
        let (wu, wv) = (&words[e.u], &words[e.v]);
        if wu.0[1..] != wv.0[1..] {
            dsu.union(e.u, e.v);
        }
    }

    // Map class roots to new indices in order of the representative word
    // (roots are lexicographically least already, and word order == id order).
    let mut roots: Vec<usize> = (0..g.vertex_count()).map(|v| dsu.find(v)).collect();
    let mut uniq = roots.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let new_index: BTreeMap<usize, usize> = uniq.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    for r in roots.iter_mut() {
        *r = new_index[r];
    }

    let mut edges = Vec::new();
    for (_, e) in g.loopless_edges() {
        let (wu, wv) = (&words[e.u], &words[e.v]);
        if wu.0[1..] == wv.0[1..] {
            edges.push(Edge {
                u: roots[e.u],
                v: roots[e.v],
                label: e.label,
                kind: EdgeKind::Normal,
                triangle: e.triangle.clone(),
            });
        }
    }

    let new_words: Vec<Word> = uniq.iter().map(|&r| words[r].clone()).collect();
    let vertex_names = new_words.iter().map(|w| w.to_string()).collect();
    let corners = g.corners.map(|[l, u, r]| [roots[l], roots[u], roots[r]]);

    Ok(LabeledMultigraph {
        family: Family::Sierpinski,
        level: g.level,
        labeling: GraphLabeling::Schreier,
        vertex_names,
        words: Some(new_words),
        edges,
        corners,
    })
}

/// The rotation-invariant labelings of Omega_2 and Omega_3, transcribed as
/// fixed edge lists. They anchor the rotation-invariant generating function
/// against brute force; higher levels are carried by the recursion alone.
pub fn build_rotation_invariant_omega(n: u32) -> Result<LabeledMultigraph> {
    match n {
        2 => {
            // Corners: F (left), D (up), H (right); inner triangle E, G, I.
            let names = ["D", "E", "F", "G", "H", "I"];
            let edges = [
                ("E", "D", 'a'),
                ("F", "E", 'b'),
                ("G", "F", 'a'),
                ("H", "G", 'b'),
                ("I", "H", 'a'),
                ("D", "I", 'b'),
                ("I", "E", 'c'),
                ("E", "G", 'c'),
                ("G", "I", 'c'),
            ];
            Ok(fixture(2, &names, &edges, ["F", "D", "H"]))
        }
        3 => {
            let names = [
                "A", "B", "C", "D", "E", "F", "G", "H", "I", "L", "M", "N", "O", "P", "Q",
            ];
            let edges = [
                ("E", "D", 'b'),
                ("D", "C", 'a'),
                ("C", "B", 'b'),
                ("B", "A", 'a'),
                ("A", "N", 'b'),
                ("N", "M", 'a'),
                ("M", "L", 'b'),
                ("L", "I", 'a'),
                ("I", "H", 'b'),
                ("H", "G", 'a'),
                ("G", "F", 'b'),
                ("F", "E", 'a'),
                ("N", "B", 'c'),
                ("O", "C", 'a'),
                ("M", "O", 'b'),
                ("P", "D", 'c'),
                ("L", "Q", 'c'),
                ("B", "O", 'c'),
                ("O", "N", 'c'),
                ("C", "P", 'b'),
                ("P", "G", 'a'),
                ("D", "F", 'c'),
                ("Q", "M", 'a'),
                ("G", "Q", 'b'),
                ("H", "L", 'c'),
                ("F", "P", 'c'),
                ("Q", "H", 'c'),
            ];
            Ok(fixture(3, &names, &edges, ["E", "A", "I"]))
        }
        _ => Err(Error::UnsupportedLevel {
            level: n,
            reason: "rotation-invariant fixtures exist for levels 2 and 3 only".into(),
        }),
    }
}

fn fixture(
    level: u32,
    names: &[&str],
    edges: &[(&str, &str, char)],
    corners_lur: [&str; 3],
) -> LabeledMultigraph {
    let idx = |s: &str| names.iter().position(|n| *n == s).unwrap();
    LabeledMultigraph {
        family: Family::Sierpinski,
        level,
        labeling: GraphLabeling::RotationInvariant,
        vertex_names: names.iter().map(|s| s.to_string()).collect(),
        words: None,
        edges: edges
            .iter()
            .map(|&(u, v, label)| Edge {
                u: idx(u),
                v: idx(v),
                label,
                kind: EdgeKind::Normal,
                triangle: None,
            })
            .collect(),
        corners: Some([
            idx(corners_lur[0]),
            idx(corners_lur[1]),
            idx(corners_lur[2]),
        ]),
    }
}

/// Orbit census of the generator permutations.
#[derive(Clone, Debug, Default)]
pub struct CycleCensus {
    /// Graph cycles made by a single non-involutive generator:
    /// label -> (orbit length -> count), length >= 2.
    pub label_cycles: BTreeMap<char, BTreeMap<usize, usize>>,
    /// 2-orbits of involutive generators (single edges, not cycles).
    pub two_orbits: BTreeMap<char, usize>,
    /// Fixed points per generator.
    pub loops: BTreeMap<char, usize>,
    /// 2-cycles of the graph formed by two involutive generators sharing an
    /// orbit, keyed by the sorted label pair (e.g. "bc").
    pub pair_two_cycles: BTreeMap<String, usize>,
}

impl CycleCensus {
    pub fn pair_count(&self, a: char, b: char) -> usize {
        let mut k: Vec<char> = vec![a, b];
        k.sort_unstable();
        let key: String = k.into_iter().collect();
        self.pair_two_cycles.get(&key).copied().unwrap_or(0)
    }
}

/// Census of a Schreier graph built by [`build_schreier`].
pub fn cycle_census(g: &LabeledMultigraph) -> Result<CycleCensus> {
    let table = GroupTable::for_family(g.family)?;
    let q = table.q;
    let n = g.level as usize;
    let count = g.vertex_count();
    let mut census = CycleCensus::default();
    let mut pair_orbits: BTreeMap<(usize, usize), Vec<char>> = BTreeMap::new();

    for (gi, def) in table.generators.iter().enumerate() {
        let involution = table.is_involution(gi);
        let mut seen = vec![false; count];
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = table.apply(gi, &Word::from_index(start, q, n)).index(q);
            while cur != start {
                seen[cur] = true;
                orbit.push(cur);
                cur = table.apply(gi, &Word::from_index(cur, q, n)).index(q);
            }
            match orbit.len() {
                1 => *census.loops.entry(def.name).or_insert(0) += 1,
                2 if involution => {
                    *census.two_orbits.entry(def.name).or_insert(0) += 1;
                    let (a, b) = (orbit[0].min(orbit[1]), orbit[0].max(orbit[1]));
                    pair_orbits.entry((a, b)).or_default().push(def.name);
                }
                len => {
                    *census
                        .label_cycles
                        .entry(def.name)
                        .or_default()
                        .entry(len)
                        .or_insert(0) += 1;
                }
            }
        }
    }

    for labels in pair_orbits.values_mut() {
        if labels.len() >= 2 {
            labels.sort_unstable();
            let key: String = labels.iter().collect();
            *census.pair_two_cycles.entry(key).or_insert(0) += 1;
        }
    }
    Ok(census)
}

fn pow3(n: u32) -> Result<u64> {
    3u64.checked_pow(n).ok_or(Error::UnsupportedLevel {
        level: n,
        reason: "3^n overflows the count range".into(),
    })
}

fn pow2(n: u32) -> Result<u64> {
    1u64.checked_shl(n)
        .filter(|_| n < 64)
        .ok_or(Error::UnsupportedLevel {
            level: n,
            reason: "2^n overflows the count range".into(),
        })
}

/// Loopless edge counts in closed form, for levels past graph-building range.
/// Validated against constructed graphs in the tests.
pub fn loopless_edge_count_formula(family: Family, n: u32) -> Result<u64> {
    match family {
        Family::Grigorchuk => Ok(3 * pow2(n - 1)? - 2),
        Family::Basilica => {
            if n >= 2 {
                Ok(3 * pow2(n - 1)?)
            } else {
                Ok(2)
            }
        }
        Family::Hanoi => Ok((pow3(n + 1)? - 3) / 2),
        Family::Sierpinski => pow3(n),
    }
}

pub fn vertex_count_formula(family: Family, n: u32) -> Result<u64> {
    match family {
        Family::Grigorchuk | Family::Basilica => pow2(n),
        Family::Hanoi => pow3(n),
        Family::Sierpinski => Ok((pow3(n)? + 3) / 2),
    }
}
