use std::collections::BTreeSet;

use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned deployment rectangle anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

/// `N(i)`: nodes strictly inside `i`'s radio range, and `U(i)`: nodes that
/// have `i` inside theirs. Ranges differ per node, so the relation is directed.
pub fn directed_neighbors(
    i: NodeId,
    positions: &[Point],
    ranges: &[f64],
) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let me = positions[i.index()];
    let mut down = BTreeSet::new();
    let mut up = BTreeSet::new();
    for (j, &p) in positions.iter().enumerate() {
        if j == i.index() {
            continue;
        }
        let d = me.distance(p);
        if d < ranges[i.index()] {
            down.insert(NodeId(j as u32));
        }
        if d < ranges[j] {
            up.insert(NodeId(j as u32));
        }
    }
    (down, up)
}

/// Snapshot of the directed neighbour graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Topology {
    downlinks: Vec<Vec<NodeId>>,
    uplinks: Vec<Vec<NodeId>>,
}

impl Topology {
    pub fn build(positions: &[Point], ranges: &[f64]) -> Self {
        let n = positions.len();
        let mut downlinks = vec![Vec::new(); n];
        let mut uplinks = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && positions[i].distance(positions[j]) < ranges[i] {
                    downlinks[i].push(NodeId(j as u32));
                    uplinks[j].push(NodeId(i as u32));
                }
            }
        }
        Self { downlinks, uplinks }
    }

    pub fn len(&self) -> usize {
        self.downlinks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.downlinks.is_empty()
    }

    /// `N(i)`, ascending by id.
    pub fn downlinks(&self, i: NodeId) -> &[NodeId] {
        &self.downlinks[i.index()]
    }

    /// `U(i)`, ascending by id.
    pub fn uplinks(&self, i: NodeId) -> &[NodeId] {
        &self.uplinks[i.index()]
    }

    pub fn reaches(&self, from: NodeId, to: NodeId) -> bool {
        self.downlinks[from.index()].binary_search(&to).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymmetric_ranges() {
        let pos = [Point::new(0.0, 0.0), Point::new(100.0, 0.0)];
        let ranges = [250.0, 50.0];
        let (down, up) = directed_neighbors(NodeId(0), &pos, &ranges);
        assert!(down.contains(&NodeId(1)));
        assert!(!up.contains(&NodeId(1)));
    }

    #[test]
    fn range_boundary_is_exclusive() {
        let pos = [Point::new(0.0, 0.0), Point::new(250.0, 0.0)];
        let (down, _) = directed_neighbors(NodeId(0), &pos, &[250.0, 250.0]);
        assert!(down.is_empty());
    }

    #[test]
    fn three_node_layout_matches_brute_force() {
        let pos = [
            Point::new(0.0, 0.0),
            Point::new(120.0, 0.0),
            Point::new(120.0, 160.0),
        ];
        let ranges = [150.0, 100.0, 210.0];
        // Pairwise distances: d01 = 120, d02 = 200, d12 = 160.
        let expect_down = [vec![1], vec![], vec![0, 1]];
        let expect_up = [vec![2], vec![0, 2], vec![]];
        let topo = Topology::build(&pos, &ranges);
        for i in 0..3 {
            let (down, up) = directed_neighbors(NodeId(i), &pos, &ranges);
            let d: Vec<u32> = down.iter().map(|n| n.0).collect();
            let u: Vec<u32> = up.iter().map(|n| n.0).collect();
            assert_eq!(d, expect_down[i as usize]);
            assert_eq!(u, expect_up[i as usize]);
            assert_eq!(
                topo.downlinks(NodeId(i))
                    .iter()
                    .map(|n| n.0)
                    .collect::<Vec<_>>(),
                d
            );
            assert_eq!(
                topo.uplinks(NodeId(i))
                    .iter()
                    .map(|n| n.0)
                    .collect::<Vec<_>>(),
                u
            );
        }
    }
}
