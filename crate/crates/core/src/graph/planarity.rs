//! Planarity testing by face-embedding (Demoucron, Malgrange, Pertuiset),
//! applied independently to every biconnected block.

use std::collections::{HashSet, VecDeque};

use super::{EdgeId, Graph};

/// True iff `g` has a plane embedding.
pub fn is_planar(g: &Graph) -> bool {
    let n = g.order();
    if n <= 4 {
        return true;
    }
    if g.size() > 3 * n - 6 {
        return false;
    }
    biconnected_blocks(g).into_iter().all(|block| {
        let mut verts: Vec<usize> = block.iter().flat_map(|e| [e.u, e.v]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() <= 4 {
            return true;
        }
        if block.len() > 3 * verts.len() - 6 {
            return false;
        }
        let local = |x: usize| verts.binary_search(&x).unwrap();
        let h = Graph::new(verts.len(), block.iter().map(|e| (local(e.u), local(e.v))))
            .expect("block edges are simple");
        block_is_planar(&h)
    })
}

/// Edge sets of the biconnected blocks of `g` (bridges form their own block).
pub(crate) fn biconnected_blocks(g: &Graph) -> Vec<Vec<EdgeId>> {
    let n = g.order();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < g.degree(v) {
                let w = g.neighbors(v)[*pos];
                *pos += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push(EdgeId::new(v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push(EdgeId::new(v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let split = EdgeId::new(parent, v);
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == split {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

// Some cycle of a biconnected graph with at least 3 vertices.
fn find_cycle(h: &Graph) -> Vec<usize> {
    // DFS from 0 until a back edge closes a cycle.
    let n = h.order();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
        if *pos < h.degree(v) {
            let w = h.neighbors(v)[*pos];
            *pos += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                return cycle;
            }
        } else {
            stack.pop();
        }
    }
    unreachable!("biconnected graph with n >= 3 has a cycle")
}

struct Fragment {
    attachments: Vec<usize>,
    // a path through the fragment joining two distinct attachments
    path: Vec<usize>,
}

fn block_is_planar(h: &Graph) -> bool {
    let n = h.order();
    let cycle = find_cycle(h);
    let mut embedded_vertex = vec![false; n];
    let mut embedded_edges: HashSet<EdgeId> = HashSet::new();
    for i in 0..cycle.len() {
        embedded_vertex[cycle[i]] = true;
        embedded_edges.insert(EdgeId::new(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];

    loop {
        let fragments = fragments(h, &embedded_vertex, &embedded_edges);
        if fragments.is_empty() {
            return true;
        }
        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|f| {
                (0..faces.len())
                    .filter(|&i| f.attachments.iter().all(|a| faces[i].contains(a)))
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return false;
        }
        let pick = admissible.iter().position(|a| a.len() == 1).unwrap_or(0);
        let face_idx = admissible[pick][0];
        let path = &fragments[pick].path;

        let face = faces.swap_remove(face_idx);
        let (first, second) = split_face(&face, path);
        faces.push(first);
        faces.push(second);
        for w in path.windows(2) {
            embedded_edges.insert(EdgeId::new(w[0], w[1]));
        }
        for &v in path {
            embedded_vertex[v] = true;
        }
    }
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let a = *path.first().unwrap();
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == b).unwrap();
    let interior = &path[1..path.len() - 1];

    // face[i..=j] cyclically, then back along the path interior
    let mut first = Vec::new();
    let mut x = i;
    loop {
        first.push(face[x]);
        if x == j {
            break;
        }
        x = (x + 1) % k;
    }
    first.extend(interior.iter().rev());

    let mut second = Vec::new();
    let mut x = j;
    loop {
        second.push(face[x]);
        if x == i {
            break;
        }
        x = (x + 1) % k;
    }
    second.extend(interior.iter());
    (first, second)
}

fn fragments(h: &Graph, embedded_vertex: &[bool], embedded_edges: &HashSet<EdgeId>) -> Vec<Fragment> {
    let n = h.order();
    let mut out = Vec::new();
    for e in h.edges() {
        if embedded_vertex[e.u] && embedded_vertex[e.v] && !embedded_edges.contains(e) {
            out.push(Fragment { attachments: vec![e.u, e.v], path: vec![e.u, e.v] });
        }
    }
    let mut component = vec![usize::MAX; n];
    for start in 0..n {
        if embedded_vertex[start] || component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        component[start] = id;
        let mut queue = VecDeque::from([start]);
        let mut attachments = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &w in h.neighbors(v) {
                if embedded_vertex[w] {
                    attachments.push(w);
                } else if component[w] == usize::MAX {
                    component[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        let path = fragment_path(h, embedded_vertex, &component, id, &attachments);
        out.push(Fragment { attachments, path });
    }
    out
}

// Path a -> (component vertices) -> b with a != b both attachments.
fn fragment_path(h: &Graph, embedded_vertex: &[bool], component: &[usize], id: usize, attachments: &[usize]) -> Vec<usize> {
    let a = attachments[0];
    let n = h.order();
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &w in h.neighbors(a) {
        if !embedded_vertex[w] && component[w] == id && prev[w] == usize::MAX {
            prev[w] = a;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in h.neighbors(v) {
            if embedded_vertex[w] {
                if w != a {
                    let mut path = vec![w, v];
                    let mut x = v;
                    while prev[x] != a {
                        x = prev[x];
                        path.push(x);
                    }
                    path.push(a);
                    path.reverse();
                    return path;
                }
            } else if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragments of a biconnected block have at least two attachments")
}
