//! Root systems of simply-laced Dynkin diagrams, computed by reflection
//! closure over the simple roots. Serves as an independent count of the
//! indecomposable modules a knitted component must produce, so it works
//! from the diagram alone and shares nothing with the knitting code.

use std::collections::{BTreeMap, BTreeSet};

/// Closes the simple roots under all simple reflections and returns the
/// positive roots as coordinate vectors over the sorted vertex list.
/// `edges` lists undirected edges; vertices of degree zero still count
/// through their simple root. The closure only terminates for diagrams
/// with a finite root system, so callers must pass Dynkin trees.
pub fn positive_roots<V: Ord + Clone>(
    vertices: &BTreeSet<V>,
    edges: &[(V, V)],
) -> Vec<Vec<i64>> {
    let idx: BTreeMap<&V, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = vertices.len();
    let mut adj = vec![BTreeSet::new(); n];
    for (a, b) in edges {
        let (i, j) = (idx[a], idx[b]);
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    while let Some(x) = queue.pop() {
        for v in 0..n {
            let mut y = x.clone();
            let neighbor_sum: i64 = adj[v].iter().map(|&u| x[u]).sum();
            y[v] = -x[v] + neighbor_sum;
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.into_iter()
        .filter(|x| x.iter().any(|&c| c != 0) && x.iter().all(|&c| c >= 0))
        .collect()
}

pub fn positive_root_count<V: Ord + Clone>(vertices: &BTreeSet<V>, edges: &[(V, V)]) -> usize {
    positive_roots(vertices, edges).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> (BTreeSet<usize>, Vec<(usize, usize)>) {
        let vertices: BTreeSet<usize> = (1..=n).collect();
        let edges = (1..n).map(|i| (i, i + 1)).collect();
        (vertices, edges)
    }

    #[test]
    fn type_a_counts() {
        for n in 1..=6 {
            let (vs, es) = path(n);
            assert_eq!(positive_root_count(&vs, &es), n * (n + 1) / 2, "A_{n}");
        }
    }

    #[test]
    fn type_d_counts() {
        // Star with three legs of length 1 plus a tail: D_n has n(n-1)
        // positive roots.
        for tail in 0..=2 {
            let n = 4 + tail;
            let vertices: BTreeSet<usize> = (0..n).collect();
            let mut edges = vec![(0, 1), (0, 2), (0, 3)];
            for t in 0..tail {
                edges.push((3 + t, 4 + t));
            }
            assert_eq!(positive_root_count(&vertices, &edges), n * (n - 1), "D_{n}");
        }
    }

    #[test]
    fn type_e6_count() {
        // Branch vertex 0 with legs of lengths 1, 2, 2.
        let vertices: BTreeSet<usize> = (0..6).collect();
        let edges = vec![(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)];
        assert_eq!(positive_root_count(&vertices, &edges), 36);
    }

    #[test]
    fn highest_root_of_d4_is_the_known_one() {
        let vertices: BTreeSet<usize> = (0..4).collect();
        let edges = vec![(0, 1), (0, 2), (0, 3)];
        let roots = positive_roots(&vertices, &edges);
        assert_eq!(roots.len(), 12);
        let highest = roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .unwrap()
            .clone();
        assert_eq!(highest, vec![2, 1, 1, 1]);
    }
}
