//! JSON file formats: groups, graph-product presentations, graph dumps with
//! hyperplane annotations, RAGG specifications, covers, action specs, and DOT
//! export. Every exported file re-imports to an equal object.

use crate::groups::{make_group, FiniteGroup};
use crate::qmgraph::{hyperplanes, QMGraph};
use crate::ragg::{AbstractGraph, Arrow, GraphCover, GraphicalEmbedding, RAGGSpec};
use crate::words::GPPresentation;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// `{"name": str, "order": n, "table": [[int]]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::invalid("declared order does not match the table"));
        }
        make_group(self.name.clone(), self.table.clone(), None)
    }

    pub fn from_group(g: &FiniteGroup) -> GroupFile {
        GroupFile {
            name: g.name().to_string(),
            order: g.order(),
            table: g.table().to_vec(),
        }
    }
}

/// Presentation: vertices, edges by name, one group per vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationFile {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub groups: BTreeMap<String, GroupFile>,
}

impl PresentationFile {
    pub fn to_presentation(&self) -> Result<GPPresentation> {
        let vid = |n: &str| -> Result<usize> {
            self.vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::invalid(format!("unknown vertex {n}")))
        };
        let mut edges = vec![];
        for (a, b) in &self.edges {
            edges.push((vid(a)?, vid(b)?));
        }
        let mut groups = vec![];
        for v in &self.vertices {
            let gf = self
                .groups
                .get(v)
                .ok_or_else(|| Error::invalid(format!("no group for vertex {v}")))?;
            groups.push(gf.to_group()?);
        }
        GPPresentation::new(self.name.clone(), self.vertices.clone(), &edges, groups)
    }

    pub fn from_presentation(p: &GPPresentation) -> PresentationFile {
        PresentationFile {
            name: p.name().to_string(),
            vertices: p.vertex_names().to_vec(),
            edges: p
                .edges()
                .iter()
                .map(|&(a, b)| (p.vertex_name(a).to_string(), p.vertex_name(b).to_string()))
                .collect(),
            groups: (0..p.vertex_count())
                .map(|v| (p.vertex_name(v).to_string(), GroupFile::from_group(p.group(v))))
                .collect(),
        }
    }
}

/// Graph dump with optional hyperplane annotations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub basepoint: usize,
    #[serde(default)]
    pub certified_interior: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplanes: Option<Vec<HyperplaneDump>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperplaneDump {
    pub id: usize,
    pub edges: Vec<usize>,
    pub carrier: Vec<usize>,
    pub sectors: Vec<Vec<usize>>,
    pub window_exact: bool,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<QMGraph> {
        QMGraph::from_edges(
            self.labels.clone(),
            &self.edges,
            self.basepoint,
            self.certified_interior,
        )
    }

    pub fn from_graph(g: &QMGraph, with_hyperplanes: bool) -> GraphFile {
        let hyps = if with_hyperplanes {
            Some(
                hyperplanes(g)
                    .hyperplanes
                    .iter()
                    .map(|h| HyperplaneDump {
                        id: h.id,
                        edges: h.edges.iter().copied().collect(),
                        carrier: h.carrier.iter().copied().collect(),
                        sectors: h.sectors.iter().map(|s| s.iter().copied().collect()).collect(),
                        window_exact: h.window_exact,
                    })
                    .collect(),
            )
        } else {
            None
        };
        GraphFile {
            labels: g.labels().to_vec(),
            edges: g.edges().to_vec(),
            basepoint: g.basepoint(),
            certified_interior: g.certified_interior(),
            hyperplanes: hyps,
        }
    }
}

/// RAGG specification file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaggFile {
    pub name: String,
    pub graph: RaggGraphFile,
    pub vertex_products: BTreeMap<String, PresentationFile>,
    /// Keyed by the minimal arrow id of each pair.
    pub edge_products: BTreeMap<String, PresentationFile>,
    pub embeddings: BTreeMap<String, EmbeddingFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaggGraphFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowFile {
    pub id: String,
    pub bar: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingFile {
    /// Edge-product vertex name -> vertex-product vertex name.
    pub vertex_map: BTreeMap<String, String>,
    /// Edge-product vertex name -> element images.
    pub factor_isos: BTreeMap<String, Vec<usize>>,
}

impl RaggFile {
    pub fn to_spec(&self) -> Result<RAGGSpec> {
        let vertex_names = self.graph.vertices.clone();
        let vid = |n: &str| -> Result<usize> {
            vertex_names
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::invalid(format!("unknown abstract vertex {n}")))
        };
        let aid = |n: &str| -> Result<usize> {
            self.graph
                .arrows
                .iter()
                .position(|a| a.id == n)
                .ok_or_else(|| Error::invalid(format!("unknown arrow {n}")))
        };
        let mut arrows = vec![];
        for a in &self.graph.arrows {
            arrows.push(Arrow {
                id: a.id.clone(),
                bar: aid(&a.bar)?,
                source: vid(&a.source)?,
                target: vid(&a.target)?,
            });
        }
        let graph = AbstractGraph {
            vertex_names: vertex_names.clone(),
            arrows,
        };
        graph.validate()?;
        let mut vertex_products = vec![];
        for v in &vertex_names {
            let pf = self
                .vertex_products
                .get(v)
                .ok_or_else(|| Error::invalid(format!("no vertex product for {v}")))?;
            vertex_products.push(pf.to_presentation()?);
        }
        // Pairs keyed by the minimal arrow id of each unoriented pair.
        let mut pair_of_arrow = vec![usize::MAX; graph.arrows.len()];
        let mut edge_products = vec![];
        for e in 0..graph.arrows.len() {
            if pair_of_arrow[e] != usize::MAX {
                continue;
            }
            let bar = graph.arrows[e].bar;
            let key = &graph.arrows[e.min(bar)].id;
            let pf = self
                .edge_products
                .get(key)
                .ok_or_else(|| Error::invalid(format!("no edge product keyed by arrow {key}")))?;
            pair_of_arrow[e] = edge_products.len();
            pair_of_arrow[bar] = edge_products.len();
            edge_products.push(pf.to_presentation()?);
        }
        let mut embeddings = vec![];
        for (e, arrow) in graph.arrows.iter().enumerate() {
            let ef = self
                .embeddings
                .get(&arrow.id)
                .ok_or_else(|| Error::invalid(format!("no embedding for arrow {}", arrow.id)))?;
            let ep = &edge_products[pair_of_arrow[e]];
            let vp = &vertex_products[arrow.source];
            let mut vertex_map = vec![];
            let mut factor_isos = vec![];
            for x in 0..ep.vertex_count() {
                let xn = ep.vertex_name(x);
                let target = ef.vertex_map.get(xn).ok_or_else(|| {
                    Error::invalid(format!("embedding {} misses factor {xn}", arrow.id))
                })?;
                let fx = vp.vertex_id(target).ok_or_else(|| {
                    Error::invalid(format!("embedding {}: unknown target {target}", arrow.id))
                })?;
                vertex_map.push(fx);
                let iso = ef
                    .factor_isos
                    .get(xn)
                    .cloned()
                    .unwrap_or_else(|| (0..ep.group(x).order()).collect());
                factor_isos.push(iso);
            }
            embeddings.push(GraphicalEmbedding {
                vertex_map,
                factor_isos,
            });
        }
        Ok(RAGGSpec {
            name: self.name.clone(),
            graph,
            vertex_products,
            edge_products,
            pair_of_arrow,
            embeddings,
        })
    }

    pub fn from_spec(spec: &RAGGSpec) -> RaggFile {
        let g = &spec.graph;
        let arrows = g
            .arrows
            .iter()
            .map(|a| ArrowFile {
                id: a.id.clone(),
                bar: g.arrows[a.bar].id.clone(),
                source: g.vertex_names[a.source].clone(),
                target: g.vertex_names[a.target].clone(),
            })
            .collect();
        let mut edge_products = BTreeMap::new();
        for (p, &e) in spec.pair_min_arrows().iter().enumerate() {
            edge_products.insert(
                g.arrows[e].id.clone(),
                PresentationFile::from_presentation(&spec.edge_products[p]),
            );
        }
        let mut embeddings = BTreeMap::new();
        for (e, arrow) in g.arrows.iter().enumerate() {
            let ep = spec.edge_product_of_arrow(e);
            let vp = &spec.vertex_products[arrow.source];
            let emb = &spec.embeddings[e];
            embeddings.insert(
                arrow.id.clone(),
                EmbeddingFile {
                    vertex_map: (0..ep.vertex_count())
                        .map(|x| {
                            (
                                ep.vertex_name(x).to_string(),
                                vp.vertex_name(emb.vertex_map[x]).to_string(),
                            )
                        })
                        .collect(),
                    factor_isos: (0..ep.vertex_count())
                        .map(|x| (ep.vertex_name(x).to_string(), emb.factor_isos[x].clone()))
                        .collect(),
                },
            );
        }
        RaggFile {
            name: spec.name.clone(),
            graph: RaggGraphFile {
                vertices: g.vertex_names.clone(),
                arrows,
            },
            vertex_products: g
                .vertex_names
                .iter()
                .enumerate()
                .map(|(v, n)| {
                    (
                        n.clone(),
                        PresentationFile::from_presentation(&spec.vertex_products[v]),
                    )
                })
                .collect(),
            edge_products,
            embeddings,
        }
    }
}

/// Covering file: the total graph plus vertex and arrow maps by name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverFile {
    pub graph: RaggGraphFile,
    pub vertex_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

impl CoverFile {
    pub fn to_cover(&self, base: &RAGGSpec) -> Result<GraphCover> {
        let total_vertices = self.graph.vertices.clone();
        let vid = |n: &str| -> Result<usize> {
            total_vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::invalid(format!("unknown vertex {n}")))
        };
        let mut arrows = vec![];
        for a in &self.graph.arrows {
            let bar = self
                .graph
                .arrows
                .iter()
                .position(|b| b.id == a.bar)
                .ok_or_else(|| Error::invalid(format!("unknown bar arrow {}", a.bar)))?;
            arrows.push(Arrow {
                id: a.id.clone(),
                bar,
                source: vid(&a.source)?,
                target: vid(&a.target)?,
            });
        }
        let total = AbstractGraph {
            vertex_names: total_vertices.clone(),
            arrows,
        };
        let mut vertex_map = vec![];
        for v in &total_vertices {
            let img = self
                .vertex_map
                .get(v)
                .ok_or_else(|| Error::invalid(format!("cover misses vertex {v}")))?;
            vertex_map.push(
                base.graph
                    .vertex_id(img)
                    .ok_or_else(|| Error::invalid(format!("unknown base vertex {img}")))?,
            );
        }
        let mut arrow_map = vec![];
        for a in &total.arrows {
            let img = self
                .arrow_map
                .get(&a.id)
                .ok_or_else(|| Error::invalid(format!("cover misses arrow {}", a.id)))?;
            arrow_map.push(
                base.graph
                    .arrow_id(img)
                    .ok_or_else(|| Error::invalid(format!("unknown base arrow {img}")))?,
            );
        }
        Ok(GraphCover {
            total,
            vertex_map,
            arrow_map,
        })
    }
}

/// Action specification: a presentation with generator words, or a RAGG spec
/// with a base vertex. Paths are resolved relative to the spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpecFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    /// Generator word literals; omitted = the full action.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gens: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ragg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_stable_json(value)?)?;
    Ok(())
}

/// Pretty JSON with a trailing newline; struct fields and BTreeMaps keep a
/// stable order, so identical inputs produce identical bytes.
pub fn to_stable_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

/// DOT export with canonical vertex order; edges may carry hyperplane ids.
pub fn to_dot(g: &QMGraph, annotate_hyperplanes: bool) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.vertex_count() {
        out.push_str(&format!("  v{} [label=\"{}\"];\n", v, g.label(v)));
    }
    let hyps = if annotate_hyperplanes {
        Some(hyperplanes(g))
    } else {
        None
    };
    for (eid, &(u, v)) in g.edges().iter().enumerate() {
        match &hyps {
            Some(h) => out.push_str(&format!("  v{} -- v{} [hyp={}];\n", u, v, h.of_edge[eid])),
            None => out.push_str(&format!("  v{} -- v{};\n", u, v)),
        }
    }
    out.push_str("}\n");
    out
}
