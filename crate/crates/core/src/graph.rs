//! Small integer-weighted digraph routines shared by the network and path modules.

/// Bellman–Ford from a virtual source joined to every vertex by a zero edge.
///
/// Returns shortest distances, or the edge indices of a negative cycle.
pub(crate) fn potentials(n: usize, edges: &[(usize, usize, i64)]) -> Result<Vec<i64>, Vec<usize>> {
    let mut dist = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last_relaxed = None;
    for _ in 0..=n {
        last_relaxed = None;
        for (k, &(u, v, w)) in edges.iter().enumerate() {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                pred[v] = Some(k);
                last_relaxed = Some(v);
            }
        }
        if last_relaxed.is_none() {
            return Ok(dist);
        }
    }
    // A vertex relaxed in round n+1 leads back into a negative cycle.
    let mut v = last_relaxed.expect("relaxation happened");
    for _ in 0..n {
        v = edges[pred[v].expect("relaxed vertex has a predecessor")].0;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = pred[v].expect("cycle vertex has a predecessor");
        cycle.push(e);
        v = edges[e].0;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Err(cycle)
}

/// Strongly connected components (Tarjan), each as a sorted vertex list.
pub(crate) fn scc(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for &w in &s.adj[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("stack nonempty");
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let mut s = St {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}
