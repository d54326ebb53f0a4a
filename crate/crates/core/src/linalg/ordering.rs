use std::collections::VecDeque;

/// Reverse Cuthill-McKee ordering of the symmetrized pattern `adj`.
///
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| deg[i])
            .unwrap();
        let start = peripheral(adj, &deg, start);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            nb.sort_by_key(|&v| (deg[v], v));
            nb.dedup();
            for v in nb {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order.reverse();
    order
}

// Pseudo-peripheral node by repeated breadth-first sweeps.
fn peripheral(adj: &[Vec<usize>], deg: &[usize], start: usize) -> usize {
    let mut s = start;
    let mut ecc = 0;
    for _ in 0..8 {
        let levels = bfs_levels(adj, s);
        let maxl = levels.iter().filter_map(|&l| l).max().unwrap_or(0);
        if maxl <= ecc && ecc > 0 {
            break;
        }
        ecc = maxl;
        let next = (0..adj.len())
            .filter(|&i| levels[i] == Some(maxl))
            .min_by_key(|&i| deg[i])
            .unwrap();
        if next == s {
            break;
        }
        s = next;
    }
    s
}

fn bfs_levels(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut lv = vec![None; adj.len()];
    lv[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let l = lv[u].unwrap();
        for &v in &adj[u] {
            if lv[v].is_none() {
                lv[v] = Some(l + 1);
                q.push_back(v);
            }
        }
    }
    lv
}
