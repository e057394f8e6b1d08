//! Iterative Tarjan strongly connected components.

/// Components of the graph on `0..num_nodes` given by `successors`.
///
/// Components are returned in reverse topological order: every edge leaving a
/// component points into a component that appears earlier in the result.
pub fn tarjan<F, I>(num_nodes: usize, mut successors: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;

    let mut index = vec![UNVISITED; num_nodes];
    let mut lowlink = vec![0usize; num_nodes];
    let mut on_stack = vec![false; num_nodes];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0usize;

    // Explicit call stack of (node, its successors, position in them).
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in 0..num_nodes {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, successors(root).into_iter().collect(), 0));

        while let Some((node, succs, pos)) = frames.last_mut() {
            let node = *node;
            if *pos < succs.len() {
                let next = succs[*pos];
                *pos += 1;
                if index[next] == UNVISITED {
                    index[next] = next_index;
                    lowlink[next] = next_index;
                    next_index += 1;
                    stack.push(next);
                    on_stack[next] = true;
                    frames.push((next, successors(next).into_iter().collect(), 0));
                } else if on_stack[next] {
                    lowlink[node] = lowlink[node].min(index[next]);
                }
                continue;
            }

            frames.pop();
            if let Some((parent, _, _)) = frames.last() {
                lowlink[*parent] = lowlink[*parent].min(lowlink[node]);
            }
            if lowlink[node] == index[node] {
                let mut component = Vec::new();
                loop {
                    let member = stack.pop().expect("component root is on the stack");
                    on_stack[member] = false;
                    component.push(member);
                    if member == node {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}
