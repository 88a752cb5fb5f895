//! The polygon-to-dimer construction for graphs with degrees in {2, 4}:
//! every vertex becomes a small gadget, every original edge becomes an
//! e-marked edge, and closed polygons of the original graph biject with
//! perfect matchings of the image.
//!
//! For the Sierpinski graphs the image is the next-level Hanoi Schreier
//! graph with its three corner vertices deleted.

use std::collections::BTreeMap;

use rug::Integer;

use crate::error::{Error, Result};
use crate::genfun;
use crate::graph::{build_schreier, Edge, EdgeKind, GraphLabeling, LabeledMultigraph};
use crate::group::Family;
use crate::oracle;

/// How each original vertex and edge maps into the transformed graph.
#[derive(Clone, Debug, Default)]
pub struct FisherGadgetMap {
    /// Per original vertex: gadget vertex ids and internal edge ids.
    pub gadgets: Vec<Gadget>,
    /// Per original edge: the id of its e-edge in the image.
    pub e_edge_ids: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Gadget {
    pub vertex_ids: Vec<usize>,
    pub internal_edge_ids: Vec<usize>,
}

/// Applies the vertex-gadget expansion.
///
/// Degree-2 vertices become two vertices joined by one edge; degree-4
/// vertices become two triangles joined by one edge. The two legs of each
/// triangle serve the two incident edges lying in the same elementary
/// triangle of the input, which is exactly the planar rotation data the
/// construction needs for the Sierpinski graphs.
pub fn fisher_transform(g: &LabeledMultigraph) -> Result<(LabeledMultigraph, FisherGadgetMap)> {
    let degrees = g.degrees();
    let n = g.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, e) in g.loopless_edges() {
        incident[e.u].push(ei);
        incident[e.v].push(ei);
    }

    let mut out_names: Vec<String> = Vec::new();
    let mut out_edges: Vec<Edge> = Vec::new();
    let mut map = FisherGadgetMap {
        gadgets: vec![Gadget::default(); n],
        e_edge_ids: vec![usize::MAX; g.edges.len()],
    };
    // Attachment point in the image for (vertex, incident edge id).
    let mut attach: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    for v in 0..n {
        let name = &g.vertex_names[v];
        let new_vertex = |suffix: usize, out_names: &mut Vec<String>| -> usize {
            out_names.push(format!("{name}/{suffix}"));
            out_names.len() - 1
        };
        let internal = |u: usize, v: usize, out_edges: &mut Vec<Edge>, gadget: &mut Gadget| {
            out_edges.push(Edge {
                u,
                v,
                label: '1',
                kind: EdgeKind::Normal,
                triangle: None,
            });
            gadget.internal_edge_ids.push(out_edges.len() - 1);
        };
        let mut gadget = Gadget::default();
        match degrees[v] {
            2 => {
                let p0 = new_vertex(0, &mut out_names);
                let p1 = new_vertex(1, &mut out_names);
                gadget.vertex_ids = vec![p0, p1];
                internal(p0, p1, &mut out_edges, &mut gadget);
                attach.insert((v, incident[v][0]), p0);
                attach.insert((v, incident[v][1]), p1);
            }
            4 => {
                // Split the four incident edges into the two elementary
                // triangles through this vertex.
                let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
                for &ei in &incident[v] {
                    let key = g.edges[ei]
                        .triangle
                        .as_ref()
                        .map(|w| w.to_string())
                        .ok_or_else(|| Error::MissingPairing {
                            vertex: name.clone(),
                        })?;
                    groups.entry(key).or_default().push(ei);
                }
                if groups.len() != 2 || groups.values().any(|g| g.len() != 2) {
                    return Err(Error::MissingPairing {
                        vertex: name.clone(),
                    });
                }
                let ids: Vec<usize> = (0..6).map(|i| new_vertex(i, &mut out_names)).collect();
                gadget.vertex_ids = ids.clone();
                // Triangle 1: 0-1-2, triangle 2: 3-4-5, joined at 2-5.
                internal(ids[0], ids[1], &mut out_edges, &mut gadget);
                internal(ids[1], ids[2], &mut out_edges, &mut gadget);
                internal(ids[2], ids[0], &mut out_edges, &mut gadget);
                internal(ids[3], ids[4], &mut out_edges, &mut gadget);
                internal(ids[4], ids[5], &mut out_edges, &mut gadget);
                internal(ids[5], ids[3], &mut out_edges, &mut gadget);
                internal(ids[2], ids[5], &mut out_edges, &mut gadget);
                for (t, edges) in groups.values().enumerate() {
                    attach.insert((v, edges[0]), ids[3 * t]);
                    attach.insert((v, edges[1]), ids[3 * t + 1]);
                }
            }
            d => {
                return Err(Error::UnsupportedDegree {
                    vertex: name.clone(),
                    degree: d,
                })
            }
        }
        map.gadgets[v] = gadget;
    }

    for (ei, e) in g.loopless_edges() {
        let pu = attach[&(e.u, ei)];
        let pv = attach[&(e.v, ei)];
        out_edges.push(Edge {
            u: pu,
            v: pv,
            label: e.label,
            kind: EdgeKind::EMarker,
            triangle: None,
        });
        map.e_edge_ids[ei] = out_edges.len() - 1;
    }

    Ok((
        LabeledMultigraph {
            family: g.family,
            level: g.level,
            labeling: GraphLabeling::Fisher,
            vertex_names: out_names,
            words: None,
            edges: out_edges,
            corners: None,
        },
        map,
    ))
}

/// The Hanoi Schreier graph with its three corner vertices (and their loops
/// and incident edges) deleted. Edges whose endpoint words differ exactly at
/// position 2 are e-marked: they are the images of the contracted graph's
/// edges under the gadget correspondence.
pub fn delete_corners(g: &LabeledMultigraph) -> Result<LabeledMultigraph> {
    if g.family != Family::Hanoi {
        return Err(Error::FamilyMismatch {
            expected: "hanoi".into(),
            found: g.family.name().into(),
        });
    }
    let words = g.words.as_ref().ok_or_else(|| {
        Error::ConstructionTable("corner deletion needs word-annotated vertices".into())
    })?;
    let n = g.level as usize;
    let keep: Vec<bool> = words
        .iter()
        .map(|w| !(0..3u8).any(|c| w.0.iter().all(|&x| x == c)))
        .collect();
    let mut new_index = vec![usize::MAX; g.vertex_count()];
    let mut names = Vec::new();
    let mut new_words = Vec::new();
    for (i, k) in keep.iter().enumerate() {
        if *k {
            new_index[i] = names.len();
            names.push(g.vertex_names[i].clone());
            new_words.push(words[i].clone());
        }
    }
    let mut edges = Vec::new();
    for (_, e) in g.loopless_edges() {
        if keep[e.u] && keep[e.v] {
            let (wu, wv) = (&words[e.u], &words[e.v]);
            let scale2 =
                n >= 2 && wu.0[1] != wv.0[1] && wu.0[0] == wv.0[0] && wu.0[2..] == wv.0[2..];
            edges.push(Edge {
                u: new_index[e.u],
                v: new_index[e.v],
                label: e.label,
                kind: if scale2 {
                    EdgeKind::EMarker
                } else {
                    EdgeKind::Normal
                },
                triangle: None,
            });
        }
    }
    Ok(LabeledMultigraph {
        family: Family::Hanoi,
        level: g.level,
        labeling: GraphLabeling::Fisher,
        vertex_names: names,
        words: Some(new_words),
        edges,
        corners: None,
    })
}

/// Count-signature and matching-count verification of the correspondence
/// between the transformed level-n Sierpinski graph and the corner-deleted
/// level-(n+1) Schreier graph.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub level: u32,
    pub vertices_match: bool,
    pub edges_match: bool,
    pub degree_sequences_match: bool,
    pub e_label_multisets_match: bool,
    pub matching_count: Integer,
    pub polygon_count: Integer,
    pub counts_match: bool,
    pub gf_reversal_match: bool,
    pub detail: String,
}

impl CorrespondenceReport {
    pub fn ok(&self) -> bool {
        self.vertices_match
            && self.edges_match
            && self.degree_sequences_match
            && self.e_label_multisets_match
            && self.counts_match
            && self.gf_reversal_match
    }
}

/// Runs the three checks: count signatures against the corner-deleted
/// Schreier graph, matching count against the polygon count, and the
/// matching generating function against the degree reversal of the polygon
/// generating function.
pub fn verify_correspondence(n: u32, matching_budget: usize) -> Result<CorrespondenceReport> {
    let omega = crate::graph::contract_to_sierpinski(&build_schreier(Family::Hanoi, n)?)?;
    let (image, _) = fisher_transform(&omega)?;
    let trimmed = delete_corners(&build_schreier(Family::Hanoi, n + 1)?)?;

    let mut detail = String::new();
    let vertices_match = image.vertex_count() == trimmed.vertex_count();
    let edges_match = image.edges.len() == trimmed.edges.len();
    if !vertices_match {
        detail.push_str(&format!(
            "vertices: image {} vs trimmed {}\n",
            image.vertex_count(),
            trimmed.vertex_count()
        ));
    }
    if !edges_match {
        detail.push_str(&format!(
            "edges: image {} vs trimmed {}\n",
            image.edges.len(),
            trimmed.edges.len()
        ));
    }
    let mut d1 = image.degrees();
    let mut d2 = trimmed.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    let degree_sequences_match = d1 == d2;
    if !degree_sequences_match {
        detail.push_str("degree sequences differ\n");
    }

    let e_labels = |g: &LabeledMultigraph| -> BTreeMap<char, usize> {
        let mut m = BTreeMap::new();
        for e in &g.edges {
            if e.kind == EdgeKind::EMarker {
                *m.entry(e.label).or_insert(0) += 1;
            }
        }
        m
    };
    let image_e = e_labels(&image);
    let trimmed_e = e_labels(&trimmed);
    let omega_labels = omega.label_edge_counts();
    let e_label_multisets_match = image_e == trimmed_e && image_e == omega_labels;
    if !e_label_multisets_match {
        detail.push_str(&format!(
            "e-label multisets: image {image_e:?}, trimmed {trimmed_e:?}, omega {omega_labels:?}\n"
        ));
    }

    let matching_gf = oracle::matching_gf_univariate(&image, matching_budget)?;
    let matching_count = matching_gf.at_ones();
    let polygon_count = Integer::from(1) << ((3u32.pow(n) - 1) / 2);
    let counts_match = matching_count == polygon_count;
    if !counts_match {
        detail.push_str(&format!(
            "matching count {matching_count} vs polygon count {polygon_count}\n"
        ));
    }

    // Matching GF (e-weight z) = z^(E(omega)) * Gamma(1/z): an edge in a
    // polygon means its e-edge is absent from the matching.
    let gamma = genfun::sierpinski_gamma_closed(n)?.gamma;
    let reversed = gamma.reverse_var("z", omega.loopless_edge_count() as i32);
    let gf_reversal_match = matching_gf == reversed;
    if !gf_reversal_match {
        detail.push_str("matching GF does not equal the reversed polygon GF\n");
    }

    Ok(CorrespondenceReport {
        level: n,
        vertices_match,
        edges_match,
        degree_sequences_match,
        e_label_multisets_match,
        matching_count,
        polygon_count,
        counts_match,
        gf_reversal_match,
        detail,
    })
}
