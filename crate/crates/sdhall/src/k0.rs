//! Grothendieck group classes as integer dimension vectors.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of `K_0` of the underlying category: one integer per simple
/// (equivalently, per quiver vertex).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Class(pub Vec<i64>);

impl K0Class {
    pub fn zero(rank: usize) -> K0Class {
        K0Class(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// All coordinates nonnegative: the class of an actual object.
    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &K0Class) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }
}

impl Add for &K0Class {
    type Output = K0Class;
    fn add(self, rhs: &K0Class) -> K0Class {
        assert_eq!(self.rank(), rhs.rank());
        K0Class(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &K0Class {
    type Output = K0Class;
    fn sub(self, rhs: &K0Class) -> K0Class {
        assert_eq!(self.rank(), rhs.rank());
        K0Class(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        K0Class(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All effective classes `c` with `c <= bound` componentwise, in
/// lexicographic order.
pub fn effective_classes_up_to(bound: &K0Class) -> Vec<K0Class> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; bound.rank()];
    loop {
        out.push(K0Class(cur.clone()));
        let mut pos = bound.rank();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < bound.0[pos] {
                cur[pos] += 1;
                for x in cur[pos + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            cur[pos] = 0;
            if pos == 0 {
                return out;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_complete_and_ordered() {
        let all = effective_classes_up_to(&K0Class(vec![2, 1]));
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], K0Class::zero(2));
        assert_eq!(all.last().unwrap(), &K0Class(vec![2, 1]));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn arithmetic() {
        let a = K0Class(vec![1, 2]);
        let b = K0Class(vec![0, 3]);
        assert_eq!(&a + &b, K0Class(vec![1, 5]));
        assert_eq!(&a - &b, K0Class(vec![1, -1]));
        assert!(!(&a - &b).is_effective());
        assert!(a.leq(&K0Class(vec![1, 2])));
        assert!(!b.leq(&a));
    }
}
