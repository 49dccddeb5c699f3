//! Oligopolies of crowd-sourced systems joined by bilateral agreements.
//!
//! Each edge `(u, w)` contributes `2 n_u n_w` to the value of any coalition
//! holding both endpoints, so two cooperating systems are worth
//! `(n_u + n_w)^2` together. The closed forms below are efficient only
//! under this convention.
//!
//! In the coarse-grain game each vertex (a whole system) is one agent. In
//! the fine-grain game every vertex contributes a major agent plus `n_v`
//! crowd agents; a vertex's crowd only counts while its major is present.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::coalition::{Coalition, PlayerTag, MAX_PLAYERS};
use crate::error::{invalid, Error, Result};
use crate::game::{Allocation, CoalitionGame, Method};

#[derive(Debug, Clone, PartialEq)]
pub struct OligopolyGraph {
    ids: Vec<String>,
    sizes: Vec<f64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    rho: f64,
}

impl OligopolyGraph {
    /// Builds a graph from `(id, crowd size)` vertices and id-pair edges.
    /// Connectivity is not required.
    pub fn new<S: AsRef<str>>(vertices: Vec<(String, f64)>, edges: &[(S, S)], rho: f64) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (id, _)) in vertices.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let edge_idx = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        let (ids, sizes) = vertices.into_iter().unzip();
        Self::from_indices(ids, sizes, &edge_idx, rho)
    }

    pub fn from_indices(ids: Vec<String>, sizes: Vec<f64>, edges: &[(usize, usize)], rho: f64) -> Result<Self> {
        if ids.len() != sizes.len() {
            return Err(invalid("sizes", "one crowd size per vertex"));
        }
        if ids.is_empty() {
            return Err(invalid("vertices", "graph needs at least one vertex"));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(invalid("rho", format!("value scale must be positive, got {rho}")));
        }
        if let Some((id, n)) = ids.iter().zip(&sizes).find(|(_, n)| !(n.is_finite() && **n >= 0.0)) {
            return Err(invalid(
                "sizes",
                format!("crowd size of `{id}` must be finite and >= 0, got {n}"),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); ids.len()];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= ids.len() {
                    return Err(Error::UnknownVertex(format!("#{v}")));
                }
            }
            if a == b {
                return Err(Error::SelfLoop(ids[a].clone()));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge(ids[a].clone(), ids[b].clone()));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            normalized.push((a, b));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(OligopolyGraph {
            ids,
            sizes,
            edges: normalized,
            adjacency,
            rho,
        })
    }

    /// Unnamed vertices `v0, v1, ..`.
    pub fn anonymous(sizes: Vec<f64>, edges: &[(usize, usize)], rho: f64) -> Result<Self> {
        let ids = (0..sizes.len()).map(|i| format!("v{i}")).collect();
        Self::from_indices(ids, sizes, edges, rho)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn with_edge(&self, a: usize, b: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push((a, b));
        Self::from_indices(self.ids.clone(), self.sizes.clone(), &edges, self.rho)
    }

    fn neighbor_mass(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&w| self.sizes[w]).sum()
    }

    fn induced_value(&self, present: impl Fn(usize) -> bool, mass: impl Fn(usize) -> f64) -> f64 {
        let own: f64 = (0..self.len()).filter(|&v| present(v)).map(|v| mass(v) * mass(v)).sum();
        let cross: f64 = self
            .edges
            .iter()
            .filter(|&&(a, b)| present(a) && present(b))
            .map(|&(a, b)| 2.0 * mass(a) * mass(b))
            .sum();
        self.rho * (own + cross)
    }
}

fn check_members(s: Coalition, n: usize) -> Result<()> {
    match s.members().find(|&i| i >= n) {
        Some(i) => Err(Error::UnknownPlayer { player: i, players: n }),
        None => Ok(()),
    }
}

/// Value of the subgraph induced by the vertex coalition `s`.
pub fn value_coarse(graph: &OligopolyGraph, s: Coalition) -> Result<f64> {
    check_members(s, graph.len())?;
    Ok(graph.induced_value(|v| s.contains(v), |v| graph.sizes[v]))
}

pub fn coarse_game(graph: &OligopolyGraph) -> Result<CoalitionGame> {
    if graph.len() > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            players: graph.len(),
            max: MAX_PLAYERS,
        });
    }
    let g = graph.clone();
    CoalitionGame::uniform("oligopoly_coarse", graph.len(), PlayerTag::CssVertex, move |s| {
        g.induced_value(|v| s.contains(v), |v| g.sizes[v])
    })
}

/// `phi_u = rho * (n_u^2 + sum_{w in N(u)} n_u n_w)`.
pub fn shapley_coarse(graph: &OligopolyGraph) -> Allocation {
    let payoffs = (0..graph.len())
        .map(|u| {
            let n = graph.sizes[u];
            graph.rho * (n * n + n * graph.neighbor_mass(u))
        })
        .collect();
    let grand = graph.induced_value(|_| true, |v| graph.sizes[v]);
    Allocation::new(payoffs, grand, Method::ClosedForm)
}

/// Player layout of the fine-grain game: vertex by vertex, the major agent
/// followed by its crowd.
#[derive(Debug, Clone, PartialEq)]
pub struct FineGrainRoster {
    majors: Vec<usize>,
    crowds: Vec<Range<usize>>,
    n_players: usize,
}

impl FineGrainRoster {
    pub fn new(graph: &OligopolyGraph) -> Result<Self> {
        let mut majors = Vec::with_capacity(graph.len());
        let mut crowds = Vec::with_capacity(graph.len());
        let mut next = 0usize;
        for (id, &n) in graph.ids.iter().zip(&graph.sizes) {
            if n.fract() != 0.0 {
                return Err(invalid(
                    "sizes",
                    format!("fine-grain crowd of `{id}` must be a whole number, got {n}"),
                ));
            }
            let n = n as usize;
            majors.push(next);
            crowds.push(next + 1..next + 1 + n);
            next += n + 1;
        }
        Ok(FineGrainRoster {
            majors,
            crowds,
            n_players: next,
        })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn major(&self, v: usize) -> usize {
        self.majors[v]
    }

    pub fn crowd(&self, v: usize) -> Range<usize> {
        self.crowds[v].clone()
    }

    pub fn tags(&self) -> Vec<PlayerTag> {
        let mut tags = vec![PlayerTag::Crowd; self.n_players];
        for &m in &self.majors {
            tags[m] = PlayerTag::Founder;
        }
        tags
    }

    /// `"A"` for the major of vertex `A`, `"A.1"`, `"A.2"`, .. for its crowd.
    pub fn labels(&self, graph: &OligopolyGraph) -> Vec<String> {
        let mut labels = Vec::with_capacity(self.n_players);
        for (v, id) in graph.ids.iter().enumerate() {
            labels.push(id.clone());
            labels.extend((1..=self.crowds[v].len()).map(|j| format!("{id}.{j}")));
        }
        labels
    }

    fn masks(&self) -> Vec<(u64, u64)> {
        self.majors
            .iter()
            .zip(&self.crowds)
            .map(|(&m, c)| {
                let crowd = c.clone().fold(0u64, |acc, i| acc | (1u64 << i));
                (1u64 << m, crowd)
            })
            .collect()
    }
}

fn fine_value_with(graph: &OligopolyGraph, masks: &[(u64, u64)], s: Coalition) -> f64 {
    let bits = s.bits();
    let present = |v: usize| bits & masks[v].0 != 0;
    let mass = |v: usize| (bits & masks[v].1).count_ones() as f64;
    graph.induced_value(present, mass)
}

pub fn value_fine(graph: &OligopolyGraph, roster: &FineGrainRoster, s: Coalition) -> Result<f64> {
    if roster.n_players > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            players: roster.n_players,
            max: MAX_PLAYERS,
        });
    }
    check_members(s, roster.n_players)?;
    Ok(fine_value_with(graph, &roster.masks(), s))
}

fn fine_game_from(
    graph: &OligopolyGraph,
    label: &str,
    value: impl Fn(&OligopolyGraph, &[(u64, u64)], Coalition) -> f64 + Send + Sync + 'static,
) -> Result<CoalitionGame> {
    let roster = FineGrainRoster::new(graph)?;
    if roster.n_players > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            players: roster.n_players,
            max: MAX_PLAYERS,
        });
    }
    let masks = roster.masks();
    let g = graph.clone();
    CoalitionGame::new(label, roster.tags(), move |s| value(&g, &masks, s))
}

pub fn fine_game(graph: &OligopolyGraph) -> Result<CoalitionGame> {
    fine_game_from(graph, "oligopoly_fine", fine_value_with)
}

/// Self-network part of the fine-grain value: `rho * sum |S_v|^2` over
/// vertices whose major is present.
pub fn fine_intra_game(graph: &OligopolyGraph) -> Result<CoalitionGame> {
    fine_game_from(graph, "oligopoly_fine_intra", |g, masks, s| {
        let bits = s.bits();
        let own: f64 = masks
            .iter()
            .filter(|(major, _)| bits & major != 0)
            .map(|(_, crowd)| ((bits & crowd).count_ones() as f64).powi(2))
            .sum();
        g.rho * own
    })
}

/// Inter-networking part of the fine-grain value: `2 rho |S_v| |S_w|` per
/// edge with both majors present.
pub fn fine_inter_game(graph: &OligopolyGraph) -> Result<CoalitionGame> {
    fine_game_from(graph, "oligopoly_fine_inter", |g, masks, s| {
        let bits = s.bits();
        let present = |v: usize| bits & masks[v].0 != 0;
        let mass = |v: usize| (bits & masks[v].1).count_ones() as f64;
        let cross: f64 = g
            .edges
            .iter()
            .filter(|&&(a, b)| present(a) && present(b))
            .map(|&(a, b)| 2.0 * mass(a) * mass(b))
            .sum();
        g.rho * cross
    })
}

/// Exact fine-grain Shapley allocation in roster order.
///
/// Major `v`: `rho * (n_v (2 n_v + 1) / 6 + sum_{w in N(v)} n_v n_w / 2)`.
/// Crowd member of `v`: `rho * ((4 n_v - 1) / 6 + sum_{w in N(v)} n_w / 2)`.
pub fn shapley_fine_closed(graph: &OligopolyGraph) -> Result<Allocation> {
    if let Some(v) = (0..graph.len()).find(|&v| graph.sizes[v] == 0.0) {
        return Err(Error::EmptyCrowd(graph.ids[v].clone()));
    }
    let roster = FineGrainRoster::new(graph)?;
    let rho = graph.rho;
    let mut payoffs = vec![0.0; roster.n_players];
    for v in 0..graph.len() {
        let n = graph.sizes[v];
        let around = graph.neighbor_mass(v);
        payoffs[roster.major(v)] = rho * (n * (2.0 * n + 1.0) / 6.0 + n * around / 2.0);
        let member = rho * ((4.0 * n - 1.0) / 6.0 + around / 2.0);
        for i in roster.crowd(v) {
            payoffs[i] = member;
        }
    }
    let grand = graph.induced_value(|_| true, |v| graph.sizes[v]);
    Ok(Allocation::new(payoffs, grand, Method::ClosedForm))
}

/// Large-crowd share of the major within its own system:
/// `(n_v / 3 + sum n_w / 2) / (n_v + sum n_w)`, always in `[1/3, 1/2]`.
pub fn fine_major_ratio(graph: &OligopolyGraph, v: usize) -> Result<f64> {
    if v >= graph.len() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let own = graph.sizes[v];
    let around = graph.neighbor_mass(v);
    let denom = own + around;
    if denom == 0.0 {
        return Err(Error::ZeroDenominator("vertex and its neighbors have no crowd"));
    }
    Ok((own / 3.0 + around / 2.0) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapley::shapley_exact;

    fn four_vertex_graph() -> OligopolyGraph {
        let vertices = ["A", "B", "C", "D"]
            .iter()
            .zip([1.0, 2.0, 3.0, 4.0])
            .map(|(id, n)| (id.to_string(), n))
            .collect();
        OligopolyGraph::new(vertices, &[("A", "B"), ("C", "B"), ("C", "A"), ("B", "D")], 1.0).unwrap()
    }

    #[test]
    fn coarse_values() {
        let g = four_vertex_graph();
        assert_eq!(value_coarse(&g, Coalition::singleton(3)).unwrap(), 16.0);
        assert_eq!(value_coarse(&g, Coalition::from_members([0, 1])).unwrap(), 9.0);
        assert_eq!(value_coarse(&g, Coalition::full(4)).unwrap(), 68.0);
        assert!(value_coarse(&g, Coalition::singleton(4)).is_err());
    }

    #[test]
    fn four_vertex_graph_closed_form() {
        let a = shapley_coarse(&four_vertex_graph());
        assert_eq!(a.payoffs, vec![6.0, 20.0, 18.0, 24.0]);
        assert_eq!(a.grand_value, 68.0);
    }

    #[test]
    fn equal_sizes_scale_with_degree() {
        let g = OligopolyGraph::anonymous(vec![3.0; 5], &[(0, 1), (0, 2), (0, 3), (3, 4)], 1.0).unwrap();
        let a = shapley_coarse(&g);
        for v in 0..5 {
            assert_eq!(a.payoffs[v], 9.0 * (1 + g.degree(v)) as f64);
        }
    }

    #[test]
    fn graph_validation() {
        let v = || vec![("a".to_string(), 1.0), ("b".to_string(), 2.0)];
        assert_eq!(
            OligopolyGraph::new(v(), &[("a", "z")], 1.0).unwrap_err(),
            Error::UnknownVertex("z".into())
        );
        assert!(matches!(
            OligopolyGraph::new(v(), &[("a", "a")], 1.0),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            OligopolyGraph::new(v(), &[("a", "b"), ("b", "a")], 1.0),
            Err(Error::DuplicateEdge(..))
        ));
        let dup = vec![("a".to_string(), 1.0), ("a".to_string(), 2.0)];
        assert!(matches!(
            OligopolyGraph::new(dup, &[] as &[(&str, &str)], 1.0),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(OligopolyGraph::anonymous(vec![-1.0], &[], 1.0).is_err());
    }

    #[test]
    fn fine_values() {
        let g = OligopolyGraph::anonymous(vec![2.0, 2.0], &[(0, 1)], 1.0).unwrap();
        let r = FineGrainRoster::new(&g).unwrap();
        assert_eq!(r.n_players(), 6);
        assert_eq!(value_fine(&g, &r, Coalition::full(6)).unwrap(), 16.0);
        // crowd of vertex 0 without its major
        assert_eq!(
            value_fine(&g, &r, Coalition::from_members([1, 2, 3, 4, 5])).unwrap(),
            4.0
        );
        assert_eq!(value_fine(&g, &r, Coalition::from_members([0, 3])).unwrap(), 0.0);
        assert_eq!(r.labels(&g), vec!["v0", "v0.1", "v0.2", "v1", "v1.1", "v1.2"]);
    }

    #[test]
    fn fine_closed_two_vertices() {
        let g = OligopolyGraph::anonymous(vec![2.0, 2.0], &[(0, 1)], 1.0).unwrap();
        let a = shapley_fine_closed(&g).unwrap();
        let exact = shapley_exact(&fine_game(&g).unwrap()).unwrap();
        for (c, e) in a.payoffs.iter().zip(&exact.payoffs) {
            assert!((c - e).abs() < 1e-12);
        }
        assert!((a.payoffs[0] - 11.0 / 3.0).abs() < 1e-12);
        assert!((a.payoffs[1] - 13.0 / 6.0).abs() < 1e-12);
        assert!((a.total() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn fine_closed_rejects_empty_crowd() {
        let g = OligopolyGraph::anonymous(vec![2.0, 0.0], &[(0, 1)], 1.0).unwrap();
        assert_eq!(shapley_fine_closed(&g).unwrap_err(), Error::EmptyCrowd("v1".into()));
        // the exact engine still handles it
        assert!(shapley_exact(&fine_game(&g).unwrap()).unwrap().is_efficient());
    }

    #[test]
    fn major_ratio_examples() {
        let iso = OligopolyGraph::anonymous(vec![7.0], &[], 1.0).unwrap();
        assert!((fine_major_ratio(&iso, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let balanced = OligopolyGraph::anonymous(vec![6.0, 2.0, 4.0], &[(0, 1), (0, 2)], 1.0).unwrap();
        assert!((fine_major_ratio(&balanced, 0).unwrap() - 5.0 / 12.0).abs() < 1e-15);
        let empty = OligopolyGraph::anonymous(vec![0.0, 0.0], &[(0, 1)], 1.0).unwrap();
        assert!(matches!(fine_major_ratio(&empty, 0), Err(Error::ZeroDenominator(_))));
    }
}
