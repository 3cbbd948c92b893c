//! Bipartite maximum matching: Hopcroft–Karp plus single augmentations that
//! keep every already-matched vertex matched.

use std::collections::VecDeque;

const INF: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteMatching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        BipartiteMatching { left: vec![None; n_left], right: vec![None; n_right] }
    }

    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }

    pub fn link(&mut self, u: usize, v: usize) {
        self.left[u] = Some(v);
        self.right[v] = Some(u);
    }

    /// Grows the vertex sets to match a larger graph, keeping current pairs.
    pub fn resize(&mut self, n_left: usize, n_right: usize) {
        self.left.resize(n_left, None);
        self.right.resize(n_right, None);
    }

    /// Searches for an augmenting path from the free left vertex `u` and
    /// applies it. Matched vertices on both sides stay matched.
    pub fn augment_from(&mut self, adj: &[Vec<usize>], u: usize) -> bool {
        debug_assert!(self.left[u].is_none());
        let mut seen = vec![false; self.right.len()];
        // Iterative DFS; each frame is (left vertex, next neighbor index).
        let mut stack: Vec<(usize, usize)> = vec![(u, 0)];
        let mut via: Vec<usize> = Vec::new();
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i == adj[x].len() {
                stack.pop();
                via.pop();
                continue;
            }
            let y = adj[x][*i];
            *i += 1;
            if seen[y] {
                continue;
            }
            seen[y] = true;
            via.push(y);
            match self.right[y] {
                None => {
                    for (k, &(lx, _)) in stack.iter().enumerate() {
                        self.link(lx, via[k]);
                    }
                    return true;
                }
                Some(next) => stack.push((next, 0)),
            }
        }
        false
    }
}

/// Maximum matching of the bipartite graph whose left vertex `u` is adjacent
/// to the right vertices `adj[u]`, extending `start`.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize, start: BipartiteMatching) -> BipartiteMatching {
    let n_left = adj.len();
    let mut m = start;
    m.resize(n_left, n_right);
    let mut dist = vec![INF; n_left];
    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if m.left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match m.right[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }
        let mut next = vec![0usize; n_left];
        for u in 0..n_left {
            if m.left[u].is_none() {
                layered_augment(adj, &mut m, &mut dist, &mut next, u);
            }
        }
    }
}

fn layered_augment(
    adj: &[Vec<usize>],
    m: &mut BipartiteMatching,
    dist: &mut [usize],
    next: &mut [usize],
    root: usize,
) -> bool {
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut u = root;
    loop {
        if next[u] == adj[u].len() {
            dist[u] = INF;
            match path.pop() {
                None => return false,
                Some((pu, _)) => {
                    u = pu;
                    continue;
                }
            }
        }
        let v = adj[u][next[u]];
        next[u] += 1;
        match m.right[v] {
            None => {
                path.push((u, v));
                for &(x, y) in &path {
                    m.link(x, y);
                }
                return true;
            }
            Some(w) if dist[w] == dist[u].wrapping_add(1) => {
                path.push((u, v));
                u = w;
            }
            Some(_) => {}
        }
    }
}
