//! The relaxation ladder: ever smaller sub-queries, circumstantial links
//! first.

use std::fmt;

use crate::logic::Level;
use crate::prover::query::Query;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RungKind {
    Full,
    DropL3,
    DropL2,
    Components,
    Singletons,
}

impl fmt::Display for RungKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RungKind::Full => "full",
            RungKind::DropL3 => "drop-L3",
            RungKind::DropL2 => "drop-L2",
            RungKind::Components => "components",
            RungKind::Singletons => "singletons",
        })
    }
}

/// One rung: sub-queries proved independently, each a list of positions in
/// the original query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rung {
    pub kind: RungKind,
    pub parts: Vec<Vec<usize>>,
}

impl Rung {
    /// Positions retained by some part.
    pub fn retained(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Builds the ladder: the full query; without L3 atoms; without L2 and L3
/// atoms; the variable-connected components of what remains; single atoms.
/// Dropping rungs that drop nothing or leave nothing are skipped. The last
/// two rungs split the atoms of the lowest level present.
pub fn decompose(q: &Query) -> Vec<Rung> {
    let all: Vec<usize> = (0..q.atoms.len()).collect();
    if all.is_empty() {
        return Vec::new();
    }
    let mut ladder = vec![Rung {
        kind: RungKind::Full,
        parts: vec![all.clone()],
    }];
    if all.len() == 1 {
        return ladder;
    }
    let below = |max: Level| -> Vec<usize> {
        all.iter()
            .copied()
            .filter(|&i| q.atoms[i].level <= max)
            .collect()
    };
    let mut current = all.clone();
    for (kind, max) in [(RungKind::DropL3, Level::L2), (RungKind::DropL2, Level::L1)] {
        let kept = below(max);
        if !kept.is_empty() && kept.len() < current.len() {
            ladder.push(Rung {
                kind,
                parts: vec![kept.clone()],
            });
            current = kept;
        }
    }
    let base = current;
    ladder.push(Rung {
        kind: RungKind::Components,
        parts: components(q, &base),
    });
    ladder.push(Rung {
        kind: RungKind::Singletons,
        parts: base.iter().map(|&i| vec![i]).collect(),
    });
    ladder
}

/// Groups positions whose atoms are linked through shared variables, in
/// order of their first member.
fn components(q: &Query, positions: &[usize]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..positions.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            let va = q.atoms[positions[a]].variables();
            let shared = q.atoms[positions[b]]
                .variables()
                .iter()
                .any(|v| va.contains(v));
            if shared {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &pos) in positions.iter().enumerate() {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(pos),
            None => out.push((r, vec![pos])),
        }
    }
    out.into_iter().map(|(_, v)| v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Atom, Term};

    fn atom(p: &str, vars: &[&str], level: Level) -> Atom {
        Atom::new(p, vars.iter().map(|v| Term::var(*v)).collect(), level)
    }

    fn kinds(l: &[Rung]) -> Vec<RungKind> {
        l.iter().map(|r| r.kind).collect()
    }

    #[test]
    fn mixed_levels_give_five_rungs() {
        let q = Query::new(
            vec![
                atom("locative", &["I", "V", "A"], Level::L1),
                atom("time", &["I", "T"], Level::L2),
                atom("circumstance", &["K", "I", "C"], Level::L3),
            ],
            "",
        );
        let l = decompose(&q);
        use RungKind::*;
        assert_eq!(kinds(&l), [Full, DropL3, DropL2, Components, Singletons]);
        assert_eq!(l[1].retained(), [0, 1]);
        assert_eq!(l[2].retained(), [0]);
    }

    #[test]
    fn connected_l1_query_skips_drop_rungs() {
        let q = Query::new(
            vec![atom("a", &["X", "Y"], Level::L1), atom("b", &["Y"], Level::L1)],
            "",
        );
        let l = decompose(&q);
        use RungKind::*;
        assert_eq!(kinds(&l), [Full, Components, Singletons]);
        assert_eq!(l[1].parts, [vec![0, 1]]);
        assert_eq!(l[2].parts, [vec![0], vec![1]]);
    }

    #[test]
    fn single_atom_has_one_rung() {
        let q = Query::new(vec![atom("a", &["X"], Level::L2)], "");
        assert_eq!(kinds(&decompose(&q)), [RungKind::Full]);
    }

    #[test]
    fn components_follow_shared_variables() {
        let q = Query::new(
            vec![
                atom("a", &["X"], Level::L1),
                atom("b", &["Y"], Level::L1),
                atom("c", &["Y", "Z"], Level::L1),
                atom("d", &["Z", "X"], Level::L1),
                atom("e", &["W"], Level::L1),
            ],
            "",
        );
        assert_eq!(components(&q, &[0, 1, 2, 3, 4]), [vec![0, 1, 2, 3], vec![4]]);
    }
}
