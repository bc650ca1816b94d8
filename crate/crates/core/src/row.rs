//! Row configurations of vertical-edge states and their canonical ordering.
//!
//! The configurations of `p` edges are ordered so that the first edge's state
//! varies slowest: all configurations starting with state 1 come first, then
//! those starting with 2, and so on. An index is therefore the base-`(k-1)`
//! number whose most significant digit is `first_state - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};

/// State of an edge as seen from one of its endpoints, in `1..=k-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeState(u32);

impl EdgeState {
    pub fn new(value: u32, k: u32) -> Result<Self> {
        check_k(k)?;
        if value == 0 || value >= k {
            return Err(Error::InvalidEdgeState { state: value, max: k - 1 });
        }
        Ok(EdgeState(value))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// The same edge seen from its other endpoint.
    pub fn conjugate(self, k: u32) -> EdgeState {
        EdgeState((k - self.0) % k)
    }
}

/// A row of `p` vertical edges together with its position in the ordered set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowConfig {
    pub k: u32,
    pub states: Vec<EdgeState>,
    pub index: u64,
}

impl RowConfig {
    pub fn from_states(states: &[u32], k: u32) -> Result<Self> {
        let index = encode(states, k)?;
        let states = states.iter().map(|&s| EdgeState(s)).collect();
        Ok(RowConfig { k, states, index })
    }

    pub fn from_index(index: u64, p: usize, k: u32) -> Result<Self> {
        let states = decode(index, p, k)?;
        Ok(RowConfig { k, states: states.into_iter().map(EdgeState).collect(), index })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Number of row configurations, `(k-1)^p`.
pub fn config_count(p: usize, k: u32) -> Result<u64> {
    check_k(k)?;
    let p32 = u32::try_from(p).map_err(|_| Error::InvalidParameter(format!("p = {p} too large")))?;
    u64::from(k - 1)
        .checked_pow(p32)
        .ok_or_else(|| Error::InvalidParameter(format!("(k-1)^p overflows for k = {k}, p = {p}")))
}

/// Position of `states` in the ordered configuration set (0-based).
pub fn encode(states: &[u32], k: u32) -> Result<u64> {
    check_k(k)?;
    config_count(states.len(), k)?;
    let base = u64::from(k - 1);
    let mut index = 0u64;
    for &s in states {
        if s == 0 || s >= k {
            return Err(Error::InvalidEdgeState { state: s, max: k - 1 });
        }
        index = index * base + u64::from(s - 1);
    }
    Ok(index)
}

/// Inverse of [`encode`].
pub fn decode(index: u64, p: usize, k: u32) -> Result<Vec<u32>> {
    let len = config_count(p, k)?;
    if index >= len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    let base = u64::from(k - 1);
    let mut states = vec![0u32; p];
    let mut rest = index;
    for slot in states.iter_mut().rev() {
        *slot = (rest % base) as u32 + 1;
        rest /= base;
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Builds the ordered set by literally prepending each state to the
    /// previous set, block by block.
    fn ordered_set(p: usize, k: u32) -> Vec<Vec<u32>> {
        let mut set: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..p {
            let mut next = Vec::new();
            for first in 1..k {
                for rest in &set {
                    let mut c = vec![first];
                    c.extend_from_slice(rest);
                    next.push(c);
                }
            }
            set = next;
        }
        set
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&[1], 3).unwrap(), 0);
        assert_eq!(encode(&[2, 1], 3).unwrap(), 2);
        let set = ordered_set(3, 4);
        let pos = set.iter().position(|c| c == &[3, 1, 2]).unwrap() as u64;
        assert_eq!(pos, 19);
        assert_eq!(encode(&[3, 1, 2], 4).unwrap(), pos);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(0, 2, 3).unwrap(), vec![1, 1]);
        assert_eq!(decode(3, 2, 3).unwrap(), vec![2, 2]);
        assert_eq!(decode(19, 3, 4).unwrap(), vec![3, 1, 2]);
    }

    #[test]
    fn matches_prepend_construction() {
        for k in 3..=5 {
            for p in 0..=4 {
                for (i, c) in ordered_set(p, k).iter().enumerate() {
                    assert_eq!(encode(c, k).unwrap(), i as u64);
                    assert_eq!(&decode(i as u64, p, k).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn empty_row() {
        assert_eq!(encode(&[], 3).unwrap(), 0);
        assert!(decode(0, 0, 5).unwrap().is_empty());
        assert!(decode(1, 0, 5).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(encode(&[0, 1], 3), Err(Error::InvalidEdgeState { state: 0, .. })));
        assert!(matches!(encode(&[3], 3), Err(Error::InvalidEdgeState { state: 3, .. })));
        assert!(matches!(encode(&[1], 2), Err(Error::UnsupportedK(2))));
        assert!(matches!(decode(4, 2, 3), Err(Error::IndexOutOfRange { index: 4, len: 4 })));
        assert!(EdgeState::new(0, 4).is_err());
    }

    #[test]
    fn conjugate_is_involution() {
        for k in 3..8 {
            for v in 1..k {
                let e = EdgeState::new(v, k).unwrap();
                let c = e.conjugate(k);
                assert!(c.value() >= 1 && c.value() < k);
                assert_eq!((e.value() + c.value()) % k, 0);
                assert_eq!(c.conjugate(k), e);
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(k in 3u32..=6, p in 0usize..=8, seed in any::<u64>()) {
            let len = config_count(p, k).unwrap();
            let i = seed % len;
            let states = decode(i, p, k).unwrap();
            prop_assert_eq!(encode(&states, k).unwrap(), i);
        }

        #[test]
        fn prefix_blocks(k in 3u32..=6, p in 0usize..=6, seed in any::<u64>()) {
            let block = config_count(p, k).unwrap();
            let i = seed % (block * u64::from(k - 1));
            let states = decode(i, p + 1, k).unwrap();
            prop_assert_eq!(u64::from(states[0] - 1), i / block);
        }
    }
}
