use std::collections::HashMap;

use super::{Group, GroupError, WreathElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsOutcome {
    Reached(usize),
    /// Not found within the radius cap.
    Unreached(usize),
}

/// All elements within `radius` of the identity, in breadth-first order,
/// with their distances.
pub fn ball<G: Group>(
    group: &G,
    gens: &[G::Elem],
    radius: usize,
    memory_cap: usize,
) -> Result<Vec<(G::Elem, usize)>, GroupError> {
    let mut dist: HashMap<G::Elem, usize> = HashMap::new();
    let mut order = vec![(group.identity(), 0)];
    dist.insert(group.identity(), 0);
    let mut head = 0;
    while head < order.len() {
        let (x, d) = order[head].clone();
        head += 1;
        if d == radius {
            continue;
        }
        for g in gens {
            let y = group.mul(&x, g);
            if !dist.contains_key(&y) {
                if order.len() >= memory_cap {
                    return Err(GroupError::MemoryCap(memory_cap));
                }
                dist.insert(y.clone(), d + 1);
                order.push((y, d + 1));
            }
        }
    }
    Ok(order)
}

/// Exact Cayley distance from the identity by breadth-first search.
pub fn word_length_bfs<G: Group>(
    group: &G,
    target: &G::Elem,
    gens: &[G::Elem],
    radius_cap: usize,
    memory_cap: usize,
) -> Result<BfsOutcome, GroupError> {
    if group.is_identity(target) {
        return Ok(BfsOutcome::Reached(0));
    }
    let mut seen: HashMap<G::Elem, ()> = HashMap::new();
    seen.insert(group.identity(), ());
    let mut frontier = vec![group.identity()];
    for d in 1..=radius_cap {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = group.mul(x, g);
                if y == *target {
                    return Ok(BfsOutcome::Reached(d));
                }
                if seen.insert(y.clone(), ()).is_none() {
                    if seen.len() > memory_cap {
                        return Err(GroupError::MemoryCap(memory_cap));
                    }
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(BfsOutcome::Unreached(radius_cap))
}

/// Word length in `F ≀ Z` for the generators `t^{±1}` and `F \ {e}` at the
/// cursor: one letter per lit site plus the shortest tour from 0 that
/// visits every lit site and ends at the cursor.
pub fn word_length_lamplighter_line<V>(e: &WreathElement<i64, V>) -> usize {
    let x = e.base;
    let (mut l, mut r) = (0.min(x), 0.max(x));
    let mut lit = 0usize;
    for s in e.lamps.support() {
        l = l.min(*s);
        r = r.max(*s);
        lit += 1;
    }
    let travel = (r - l) + ((0 - l) + (r - x)).min((r - 0) + (x - l));
    lit + travel as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Cyclic, Integers, Wreath};

    #[test]
    fn small_lamplighter_lengths() {
        let w = Wreath::new(Cyclic::new(2), Integers);
        assert_eq!(word_length_lamplighter_line(&w.lamp_at(0, 1)), 1);
        assert_eq!(word_length_lamplighter_line(&w.lamp_at(1, 1)), 3);
        let e = w.element(w.config([(-1, 1), (1, 1)]), 0);
        assert_eq!(word_length_lamplighter_line(&e), 6);
        assert_eq!(word_length_lamplighter_line(&w.identity()), 0);
    }

    #[test]
    fn bfs_matches_on_small_cases() {
        let w = Wreath::new(Cyclic::new(2), Integers);
        let gens = vec![w.t(), w.inv(&w.t()), w.lamp_at(0, 1)];
        let e = w.element(w.config([(-1, 1), (1, 1)]), 0);
        assert_eq!(
            word_length_bfs(&w, &e, &gens, 8, 1 << 20).unwrap(),
            BfsOutcome::Reached(6)
        );
        assert_eq!(
            word_length_bfs(&w, &e, &gens, 4, 1 << 20).unwrap(),
            BfsOutcome::Unreached(4)
        );
        assert!(matches!(
            word_length_bfs(&w, &e, &gens, 8, 10),
            Err(GroupError::MemoryCap(10))
        ));
    }

    #[test]
    fn ball_sizes_on_z() {
        let b = ball(&Integers, &[1, -1], 5, 100).unwrap();
        assert_eq!(b.len(), 11);
        assert!(b.iter().all(|(x, d)| x.unsigned_abs() as usize == *d));
    }
}
