//! Permutations of the four factors, written in cycle notation on {1,2,3,4}.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("point {0} is outside 1..=4")]
    OutOfRange(u32),
    #[error("cycles {0:?} do not describe a bijection of 1..=4")]
    NotBijective(Vec<Vec<u32>>),
}

/// `images[i]` is the image of factor `i` (zero-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn from_images(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &v in &images {
            if v > 3 || std::mem::replace(&mut seen[v as usize], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// Builds a permutation from one-based disjoint cycles, e.g. `[[1,3,2,4]]`.
    pub fn from_cycles(cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: [Option<u8>; 4] = [None; 4];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                for v in [p, q] {
                    if !(1..=4).contains(&v) {
                        return Err(PermError::OutOfRange(v));
                    }
                }
                let slot = &mut images[p as usize - 1];
                if slot.is_some() {
                    return Err(PermError::NotBijective(cycles.to_vec()));
                }
                *slot = Some(q as u8 - 1);
            }
        }
        let filled: [u8; 4] = std::array::from_fn(|i| images[i].unwrap_or(i as u8));
        Perm::from_images(filled).ok_or_else(|| PermError::NotBijective(cycles.to_vec()))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Perm) -> Perm {
        Perm(std::array::from_fn(|i| self.0[other.0[i] as usize]))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = [0u8; 4];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Zero-based cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4 {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.apply(j);
            }
            out.push(cycle);
        }
        out
    }

    /// One-based nontrivial cycles, the inverse of [`Perm::from_cycles`].
    pub fn to_cycles(&self) -> Vec<Vec<u32>> {
        self.cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.into_iter().map(|i| i as u32 + 1).collect())
            .collect()
    }

    pub fn order(&self) -> u32 {
        self.cycles().iter().fold(1, |acc, c| num_integer::lcm(acc, c.len() as u32))
    }

    pub fn all() -> Vec<Perm> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Some(p) = Perm::from_images([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.to_cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            write!(f, "(")?;
            for v in c {
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let p = Perm::from_cycles(&[vec![1, 3, 2, 4]]).unwrap();
        assert_eq!(p.images(), [2, 3, 1, 0]);
        assert_eq!(p.to_string(), "(1324)");
        assert_eq!(p.order(), 4);
        assert_eq!(p.after(&p).to_string(), "(12)(34)");
        assert_eq!(Perm::from_cycles(&p.to_cycles()).unwrap(), p);
        assert_eq!(p.after(&p.inverse()), Perm::IDENTITY);
    }

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(
            Perm::from_cycles(&[vec![1, 2], vec![2, 3]]),
            Err(PermError::NotBijective(vec![vec![1, 2], vec![2, 3]]))
        );
        assert_eq!(Perm::from_cycles(&[vec![1, 5]]), Err(PermError::OutOfRange(5)));
        assert_eq!(Perm::from_cycles(&[]).unwrap(), Perm::IDENTITY);
    }

    #[test]
    fn symmetric_group_size() {
        assert_eq!(Perm::all().len(), 24);
    }
}
