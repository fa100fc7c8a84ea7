//! Single-linkage clustering of solver hits.

use crate::linalg::distance;

/// Clusters holding at least this many hits may be part of a continuum.
pub const CONTINUUM_MIN_HITS: usize = 10;
/// A cluster wider than this many dedup radii is reported as a continuum.
pub const CONTINUUM_DIAMETER_FACTOR: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Indices into the clustered point list, ascending.
    pub members: Vec<usize>,
    /// Largest pairwise distance between members.
    pub diameter: f64,
}

impl Cluster {
    pub fn is_continuum(&self, radius: f64) -> bool {
        self.members.len() >= CONTINUUM_MIN_HITS && self.diameter > CONTINUUM_DIAMETER_FACTOR * radius
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups points whose chains of pairwise distances stay within `radius`.
/// Clusters are ordered by their smallest member.
pub fn dedup(points: &[Vec<f64>], radius: f64) -> Vec<Cluster> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if points[j][0] - points[i][0] > radius {
                break;
            }
            if distance(&points[i], &points[j]) <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
        .into_iter()
        .map(|members| {
            let mut diameter: f64 = 0.0;
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    diameter = diameter.max(distance(&points[a], &points[b]));
                }
            }
            Cluster { members, diameter }
        })
        .collect()
}

/// True when some cluster looks like a sampled continuum rather than an
/// isolated point.
pub fn continuum_suspect(clusters: &[Cluster], radius: f64) -> bool {
    clusters.iter().any(|c| c.is_continuum(radius))
}
