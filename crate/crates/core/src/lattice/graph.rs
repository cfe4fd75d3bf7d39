use petgraph::unionfind::UnionFind;

use super::GoodArmSet;

/// Similarity graph over one user set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserGraph {
    pub nodes: Vec<usize>,
    /// Pairs `(a, b)` of positions into `nodes`, `a < b`.
    pub edges: Vec<(usize, usize)>,
}

impl UserGraph {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (Some(a), Some(b)) = (self.position(u), self.position(v)) else {
            return false;
        };
        let key = (a.min(b), a.max(b));
        self.edges.contains(&key)
    }

    fn position(&self, user: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == user)
    }
}

/// Links two users when their good-arm sets intersect and their estimate
/// rows differ by at most `slack * delta` on every active arm.
/// `rows[i]` and `good[i]` belong to `users[i]`.
pub fn build_user_graph(users: &[usize], rows: &[Vec<f64>], good: &[GoodArmSet], delta: f64, slack: f64) -> UserGraph {
    assert_eq!(users.len(), rows.len());
    assert_eq!(users.len(), good.len());
    let bound = slack * delta;
    let mut edges = Vec::new();
    for a in 0..users.len() {
        for b in a + 1..users.len() {
            let close = rows[a].iter().zip(&rows[b]).all(|(x, y)| (x - y).abs() <= bound);
            if close && good[a].intersects(&good[b]) {
                edges.push((a, b));
            }
        }
    }
    UserGraph {
        nodes: users.to_vec(),
        edges,
    }
}

/// Connected components of `graph`, each with the union of its members'
/// good arms (sorted). Components are ordered by their smallest user.
pub fn refine_partition(graph: &UserGraph, good: &[GoodArmSet]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = graph.nodes.len();
    let mut uf = UnionFind::<usize>::new(n);
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    let labels = uf.into_labeling();
    let mut order: Vec<usize> = Vec::new();
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let slot = match order.iter().position(|&l| l == labels[i]) {
            Some(s) => s,
            None => {
                order.push(labels[i]);
                groups.push((Vec::new(), Vec::new()));
                groups.len() - 1
            }
        };
        groups[slot].0.push(graph.nodes[i]);
        groups[slot].1.extend_from_slice(&good[i].arms);
    }
    for (users, arms) in &mut groups {
        users.sort_unstable();
        arms.sort_unstable();
        arms.dedup();
    }
    groups.sort_by_key(|(users, _)| users[0]);
    groups
}
