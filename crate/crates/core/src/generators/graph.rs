use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected graph with a proper coloring in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredGraph {
    pub k: usize,
    /// `colors[v]` is the color of vertex `v`.
    pub colors: Vec<usize>,
    /// Normalized as `(u, v)` with `u < v`, sorted, no duplicates.
    pub edges: Vec<(usize, usize)>,
}

impl ColoredGraph {
    pub fn new(
        k: usize,
        colors: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<ColoredGraph> {
        if k < 2 {
            return Err(Error::InvalidParameter(
                "a colored graph needs k >= 2".into(),
            ));
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvalidParameter(format!(
                "color {c} outside 1..={k}"
            )));
        }
        let n = colors.len();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParameter(format!("bad edge {u}-{v}")));
            }
            if colors[u] == colors[v] {
                return Err(Error::ImproperColoring(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(ColoredGraph {
            k,
            colors,
            edges: set.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn class(&self, color: usize) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == color)
            .collect()
    }

    pub fn without_edge(&self, u: usize, v: usize) -> ColoredGraph {
        let e = (u.min(v), u.max(v));
        ColoredGraph {
            k: self.k,
            colors: self.colors.clone(),
            edges: self.edges.iter().copied().filter(|&x| x != e).collect(),
        }
    }
}

/// Brute force: one vertex per color class, all pairs adjacent.
/// Returns the first such clique found.
pub fn has_multicolored_clique(graph: &ColoredGraph) -> Option<Vec<usize>> {
    (1..=graph.k)
        .map(|c| graph.class(c))
        .multi_cartesian_product()
        .find(|pick| {
            pick.iter()
                .tuple_combinations()
                .all(|(&u, &v)| graph.has_edge(u, v))
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlantedClique {
    pub graph: ColoredGraph,
    /// The planted clique, one vertex per color (color order).
    pub clique: Vec<usize>,
    pub has_clique: bool,
}

/// A `k`-colored graph with `per_color` vertices per class, random
/// cross-color noise edges, and a planted multicolored clique.
///
/// For a no-instance one planted edge is removed, and further edges are
/// removed from any remaining multicolored clique until none is left.
pub fn planted_clique(
    k: usize,
    per_color: usize,
    noise: f64,
    seed: u64,
    yes: bool,
) -> Result<PlantedClique> {
    if per_color == 0 {
        return Err(Error::InvalidParameter(
            "per_color must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidParameter("noise must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors: Vec<usize> = (1..=k)
        .flat_map(|c| std::iter::repeat_n(c, per_color))
        .collect();
    let clique: Vec<usize> = (0..k)
        .map(|c| c * per_color + rng.gen_range(0..per_color))
        .collect();
    let mut edges: Vec<(usize, usize)> = clique.iter().copied().tuple_combinations().collect();
    for (u, v) in (0..colors.len()).tuple_combinations() {
        if colors[u] != colors[v] && rng.gen_bool(noise) {
            edges.push((u, v));
        }
    }
    let mut graph = ColoredGraph::new(k, colors, edges)?;
    if !yes {
        graph = graph.without_edge(clique[0], clique[1]);
        while let Some(found) = has_multicolored_clique(&graph) {
            graph = graph.without_edge(found[0], found[1]);
        }
    }
    Ok(PlantedClique {
        graph,
        clique,
        has_clique: yes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_improper_coloring() {
        assert_eq!(
            ColoredGraph::new(2, vec![1, 1, 2], [(0, 1)]),
            Err(Error::ImproperColoring(0, 1))
        );
    }

    #[test]
    fn planted_yes_and_no() {
        for seed in 0..20 {
            let yes = planted_clique(3, 3, 0.4, seed, true).unwrap();
            assert!(has_multicolored_clique(&yes.graph).is_some());
            let no = planted_clique(3, 3, 0.4, seed, false).unwrap();
            assert!(has_multicolored_clique(&no.graph).is_none());
        }
    }

    #[test]
    fn triangle() {
        let g = ColoredGraph::new(3, vec![1, 2, 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(has_multicolored_clique(&g), Some(vec![0, 1, 2]));
        assert!(has_multicolored_clique(&g.without_edge(2, 0)).is_none());
    }
}
