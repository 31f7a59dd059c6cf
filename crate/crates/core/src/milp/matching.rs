use std::collections::VecDeque;

/// A maximum matching as (beam, user) pairs sorted by beam.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

const FREE: usize = usize::MAX;

/// Maximum-cardinality matching of a bipartite graph given as a row-major
/// `rows x cols` adjacency (Hopcroft-Karp).
pub fn max_matching(rows: usize, cols: usize, adjacency: &[bool]) -> Matching {
    assert_eq!(adjacency.len(), rows * cols, "adjacency must be rows x cols");
    let nbrs: Vec<Vec<usize>> =
        (0..rows).map(|r| (0..cols).filter(|&c| adjacency[r * cols + c]).collect()).collect();
    let mut match_row = vec![FREE; rows];
    let mut match_col = vec![FREE; cols];
    let mut dist = vec![0usize; rows];

    loop {
        // BFS layering from free rows
        let mut queue = VecDeque::new();
        for r in 0..rows {
            if match_row[r] == FREE {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &c in &nbrs[r] {
                let next = match_col[c];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[r] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        for r in 0..rows {
            if match_row[r] == FREE {
                augment(r, &nbrs, &mut match_row, &mut match_col, &mut dist);
            }
        }
    }

    let pairs = (0..rows).filter(|&r| match_row[r] != FREE).map(|r| (r, match_row[r])).collect();
    Matching { pairs }
}

fn augment(
    r: usize,
    nbrs: &[Vec<usize>],
    match_row: &mut [usize],
    match_col: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &c in &nbrs[r] {
        let next = match_col[c];
        if next == FREE || (dist[next] == dist[r] + 1 && augment(next, nbrs, match_row, match_col, dist)) {
            match_row[r] = c;
            match_col[c] = r;
            return true;
        }
    }
    dist[r] = usize::MAX;
    false
}

/// Matching size of the subgraph induced by the selected rows and columns.
pub fn induced_matching_size(
    rows: usize,
    cols: usize,
    adjacency: &[bool],
    row_on: &[bool],
    col_on: &[bool],
) -> usize {
    let sub: Vec<bool> =
        (0..rows * cols).map(|i| adjacency[i] && row_on[i / cols] && col_on[i % cols]).collect();
    max_matching(rows, cols, &sub).size()
}
