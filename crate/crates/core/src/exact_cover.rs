//! Algorithm X over dancing links, with secondary (at-most-once) items.
//!
//! Primary items must be covered exactly once, secondary items at most once.
//! The branching item is the primary item with the fewest remaining options,
//! ties broken by the lowest index, so runs are deterministic.

use crate::error::{Error, Result};

const ROOT: usize = 0;

pub(crate) struct ExactCover {
    // node arrays; nodes 1..=items are item headers
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    item: Vec<usize>,
    option_of: Vec<usize>,
    size: Vec<usize>,
    options: usize,
}

pub(crate) enum Outcome {
    Solved(Vec<usize>),
    Unsolvable,
}

impl ExactCover {
    /// Items `0..primary` are primary, `primary..primary + secondary` secondary.
    pub(crate) fn new(primary: usize, secondary: usize) -> Self {
        let items = primary + secondary;
        let mut ec = ExactCover {
            left: vec![0; items + 1],
            right: vec![0; items + 1],
            up: (0..=items).collect(),
            down: (0..=items).collect(),
            item: (0..=items).collect(),
            option_of: vec![usize::MAX; items + 1],
            size: vec![0; items + 1],
            options: 0,
        };
        // only primary headers are linked into the root list
        let mut prev = ROOT;
        for h in 1..=primary {
            ec.right[prev] = h;
            ec.left[h] = prev;
            prev = h;
        }
        ec.right[prev] = ROOT;
        ec.left[ROOT] = prev;
        for h in (primary + 1)..=items {
            ec.left[h] = h;
            ec.right[h] = h;
        }
        ec
    }

    /// Adds an option covering `items` (0-based); returns its index.
    pub(crate) fn add_option(&mut self, items: &[usize]) -> usize {
        let id = self.options;
        self.options += 1;
        let first = self.item.len();
        for (j, &it) in items.iter().enumerate() {
            let h = it + 1;
            let node = self.item.len();
            self.item.push(h);
            self.option_of.push(id);
            let last = self.up[h];
            self.up.push(last);
            self.down.push(h);
            self.down[last] = node;
            self.up[h] = node;
            self.size[h] += 1;
            let (l, r) = if j == 0 { (node, node) } else { (node - 1, first) };
            self.left.push(l);
            self.right.push(r);
            if j > 0 {
                self.right[node - 1] = node;
                self.left[first] = node;
            }
        }
        id
    }

    fn cover(&mut self, h: usize) {
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[h];
        while i != h {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.item[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, h: usize) {
        let mut i = self.up[h];
        while i != h {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.item[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = h;
        self.left[r] = h;
    }

    fn choose(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut h = self.right[ROOT];
        while h != ROOT {
            if self.size[h] < best_size {
                best_size = self.size[h];
                best = Some(h);
                if best_size == 0 {
                    break;
                }
            }
            h = self.right[h];
        }
        best
    }

    /// First solution in search order, or `Unsolvable` after exhausting the tree.
    /// Each option tried counts against `budget`.
    pub(crate) fn solve(&mut self, budget: u64) -> Result<Outcome> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut spent = 0u64;
        if self.search(&mut chosen, &mut spent, budget)? {
            Ok(Outcome::Solved(chosen.iter().map(|&node| self.option_of[node]).collect()))
        } else {
            Ok(Outcome::Unsolvable)
        }
    }

    fn search(&mut self, chosen: &mut Vec<usize>, spent: &mut u64, budget: u64) -> Result<bool> {
        let Some(h) = self.choose() else { return Ok(true) };
        if self.size[h] == 0 {
            return Ok(false);
        }
        self.cover(h);
        let mut r = self.down[h];
        while r != h {
            *spent += 1;
            if *spent > budget {
                return Err(Error::BudgetExhausted(budget));
            }
            chosen.push(r);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.item[j]);
                j = self.right[j];
            }
            if self.search(chosen, spent, budget)? {
                return Ok(true);
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.item[j]);
                j = self.left[j];
            }
            chosen.pop();
            r = self.down[r];
        }
        self.uncover(h);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // items a..g, the classic six options
        let opts: [&[usize]; 6] = [&[2, 4], &[0, 3, 6], &[1, 2, 5], &[0, 3, 5], &[1, 6], &[3, 4, 6]];
        let mut ec = ExactCover::new(7, 0);
        for o in opts {
            ec.add_option(o);
        }
        let Outcome::Solved(mut sol) = ec.solve(1000).unwrap() else { panic!() };
        sol.sort_unstable();
        assert_eq!(sol, vec![0, 3, 4]);
    }

    #[test]
    fn secondary_items_at_most_once() {
        let mut ec = ExactCover::new(2, 1);
        ec.add_option(&[0, 2]);
        ec.add_option(&[1, 2]);
        assert!(matches!(ec.solve(100).unwrap(), Outcome::Unsolvable));

        let mut ec = ExactCover::new(2, 1);
        ec.add_option(&[0, 2]);
        ec.add_option(&[1]);
        assert!(matches!(ec.solve(100).unwrap(), Outcome::Solved(_)));
    }

    #[test]
    fn budget_is_enforced() {
        let mut ec = ExactCover::new(3, 0);
        ec.add_option(&[0]);
        ec.add_option(&[1]);
        assert!(matches!(ec.solve(100).unwrap(), Outcome::Unsolvable));
        let mut ec = ExactCover::new(2, 0);
        ec.add_option(&[0]);
        ec.add_option(&[1]);
        assert!(matches!(ec.solve(1), Err(Error::BudgetExhausted(1))));
    }
}
