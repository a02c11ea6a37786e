use super::TransitionGraph;

/// Strongly connected components in reverse topological order (every edge
/// between components goes from a later to an earlier one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Component index per cell.
    pub component: Vec<usize>,
    /// Cells per component, sorted.
    pub members: Vec<Vec<usize>>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Iterative Tarjan.
pub fn strongly_connected_components(edges: &[Vec<usize>]) -> Components {
    const UNSEEN: usize = usize::MAX;
    let n = edges.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut members = Vec::new();
    let mut next_index = 0;
    // (node, position in its edge list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            if let Some(&w) = edges[v].get(pos) {
                call.last_mut().expect("nonempty call stack").1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = members.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("Tarjan stack underflow");
                    on_stack[w] = false;
                    component[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                members.push(comp);
            }
        }
    }
    Components { component, members }
}

/// Component-level successor lists, sorted and without self-edges.
pub fn condensation(graph: &TransitionGraph, comps: &Components) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); comps.len()];
    for (v, outs) in graph.edges.iter().enumerate() {
        let cv = comps.component[v];
        for &w in outs {
            let cw = comps.component[w];
            if cw != cv {
                out[cv].push(cw);
            }
        }
    }
    for succ in &mut out {
        succ.sort_unstable();
        succ.dedup();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph() {
        // 0 <-> 1 -> 2 -> 3 -> 2, 4 isolated
        let edges = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let c = strongly_connected_components(&edges);
        assert_eq!(c.len(), 3);
        assert_eq!(c.component[0], c.component[1]);
        assert_eq!(c.component[2], c.component[3]);
        // sinks come first
        assert!(c.component[2] < c.component[0]);
    }

    #[test]
    fn long_path_does_not_overflow_stack() {
        let n = 200_000;
        let edges: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![0] }).collect();
        let c = strongly_connected_components(&edges);
        assert_eq!(c.len(), 1);
    }
}
