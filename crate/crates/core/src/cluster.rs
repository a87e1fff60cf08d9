//! Hoshen-Kopelman labeling of same-opinion clusters under von Neumann
//! adjacency, plus cluster-size statistics.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// Union-find over provisional labels; path compression + union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind {
            parent: Vec::new(),
            size: Vec::new(),
        }
    }

    fn make_set(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            // halve the path as we walk it
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return ra;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        big
    }
}

/// Partition of a grid into same-opinion connected components.
///
/// Labels are canonical: consecutive integers from 0 in row-major
/// first-encounter order, so identical opinion grids always yield identical
/// labelings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    /// Per-cell cluster id, row-major.
    pub labels: Vec<u32>,
    /// Member count per cluster id.
    pub sizes: Vec<u32>,
}

impl ClusterLabeling {
    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest_cluster_size(&self) -> u32 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Size of the largest cluster relative to the whole grid.
    pub fn largest_cluster_fraction(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.largest_cluster_size() as f64 / self.labels.len() as f64
    }

    /// Histogram over the multiset of cluster sizes.
    pub fn size_histogram(&self) -> BTreeMap<u32, u32> {
        let mut hist = BTreeMap::new();
        for &s in &self.sizes {
            *hist.entry(s).or_insert(0) += 1;
        }
        hist
    }

    /// Number of clusters with at most `threshold` members.
    pub fn count_small_clusters(&self, threshold: u32) -> usize {
        self.sizes.iter().filter(|&&s| s <= threshold).count()
    }
}

/// Label same-opinion clusters of a rectangular `rows x cols` grid
/// (row-major `opinions`, `rows = opinions.len() / cols`).
///
/// Single raster pass in the Hoshen-Kopelman style: each cell inspects its
/// already-visited west and north neighbors, inheriting or merging their
/// provisional labels; a second pass canonicalizes label order.
pub fn label_clusters(opinions: &[u32], cols: usize) -> ClusterLabeling {
    assert!(cols > 0, "grid must have at least one column");
    assert_eq!(opinions.len() % cols, 0, "grid must be rectangular");
    let rows = opinions.len() / cols;
    let mut uf = UnionFind::new();
    let mut provisional = vec![0u32; opinions.len()];

    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            let west = (c > 0 && opinions[i - 1] == opinions[i]).then(|| provisional[i - 1]);
            let north = (r > 0 && opinions[i - cols] == opinions[i]).then(|| provisional[i - cols]);
            provisional[i] = match (west, north) {
                (None, None) => uf.make_set(),
                (Some(w), None) => w,
                (None, Some(n)) => n,
                (Some(w), Some(n)) => uf.union(w, n),
            };
        }
    }

    // canonicalize: number roots by row-major first encounter
    let mut canonical = vec![u32::MAX; uf.parent.len()];
    let mut labels = vec![0u32; opinions.len()];
    let mut sizes: Vec<u32> = Vec::new();
    for (i, &p) in provisional.iter().enumerate() {
        let root = uf.find(p);
        let slot = &mut canonical[root as usize];
        if *slot == u32::MAX {
            *slot = sizes.len() as u32;
            sizes.push(0);
        }
        labels[i] = *slot;
        sizes[*slot as usize] += 1;
    }

    ClusterLabeling { labels, sizes }
}
