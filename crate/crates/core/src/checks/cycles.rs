//! Negative-cycle search on a complete digraph with weights `w(i, j)`.

use crate::scalar::{Arith, Scalar};

/// Bellman–Ford from a virtual source joined to every node at cost zero.
///
/// Returns a negative cycle as a node list `c[0] -> c[1] -> ... -> c[0]`,
/// rotated so the smallest index comes first.
pub(crate) fn find_negative_cycle(n: usize, w: &dyn Fn(usize, usize) -> Scalar, arith: &Arith) -> Option<Vec<usize>> {
    let mut dist = vec![arith.zero(); n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for _ in 0..=n {
        let mut changed = false;
        for j in 0..n {
            for i in 0..n {
                if i == j {
                    continue;
                }
                let cand = &dist[i] + &w(i, j);
                if arith.is_negative(&(&cand - &dist[j])) {
                    dist[j] = cand;
                    pred[j] = Some(i);
                    changed = true;
                }
            }
        }
        if !changed {
            return None;
        }
        if let Some(c) = predecessor_cycle(&pred) {
            let c = canonical(c);
            if arith.is_negative(&cycle_weight(&c, w)) {
                return Some(c);
            }
        }
    }
    None
}

/// Any cycle in the predecessor forest, listed in forward edge order.
fn predecessor_cycle(pred: &[Option<usize>]) -> Option<Vec<usize>> {
    let n = pred.len();
    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = Some(start);
        while let Some(u) = v {
            match state[u] {
                0 => {
                    state[u] = 1;
                    walk.push(u);
                    v = pred[u];
                }
                1 => {
                    // walk follows predecessors, so reverse for edge order
                    let pos = walk.iter().position(|&x| x == u).expect("on walk");
                    let mut cycle: Vec<usize> = walk[pos..].to_vec();
                    cycle.reverse();
                    return Some(cycle);
                }
                _ => break,
            }
        }
        for u in walk {
            state[u] = 2;
        }
    }
    None
}

fn canonical(mut c: Vec<usize>) -> Vec<usize> {
    let k = c.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
    c.rotate_left(k);
    c
}

pub(crate) fn cycle_weight(c: &[usize], w: &dyn Fn(usize, usize) -> Scalar) -> Scalar {
    let mut total = w(c[c.len() - 1], c[0]);
    for e in c.windows(2) {
        total = &total + &w(e[0], e[1]);
    }
    total
}

/// Exhaustive search over simple cycles with at most `max_len` nodes.
///
/// Returns the first negative cycle in lexicographic order (smallest node
/// first) and the number of cycles examined.
pub(crate) fn brute_force_negative_cycle(
    n: usize,
    max_len: usize,
    w: &dyn Fn(usize, usize) -> Scalar,
    arith: &Arith,
) -> (Option<Vec<usize>>, u64) {
    let mut examined = 0u64;
    let mut path = Vec::with_capacity(max_len);
    for start in 0..n {
        path.clear();
        path.push(start);
        if let Some(c) = extend(n, max_len, w, arith, &mut path, &arith.zero(), &mut examined) {
            return (Some(c), examined);
        }
    }
    (None, examined)
}

fn extend(
    n: usize,
    max_len: usize,
    w: &dyn Fn(usize, usize) -> Scalar,
    arith: &Arith,
    path: &mut Vec<usize>,
    partial: &Scalar,
    examined: &mut u64,
) -> Option<Vec<usize>> {
    let start = path[0];
    let last = *path.last().expect("nonempty path");
    for next in start + 1..n {
        if path.contains(&next) {
            continue;
        }
        let through = partial + &w(last, next);
        path.push(next);
        *examined += 1;
        let closed = &through + &w(next, start);
        if arith.is_negative(&closed) {
            return Some(path.clone());
        }
        if path.len() < max_len {
            if let Some(c) = extend(n, max_len, w, arith, path, &through, examined) {
                return Some(c);
            }
        }
        path.pop();
    }
    None
}
