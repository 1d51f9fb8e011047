//! Independence systems: hereditary set families generalising dependency
//! graphs for describing partial independence.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IndependenceSystemError {
    #[error("ground set has {got} elements, enumeration cap is {cap}")]
    TooLarge { got: usize, cap: usize },
    #[error("family is not hereditary: {superset:?} is listed but its subset {subset:?} is not")]
    NotHereditary {
        superset: Vec<String>,
        subset: Vec<String>,
    },
    #[error("empty set missing from the family")]
    EmptySetMissing,
    #[error("set references unknown element `{0}`")]
    UnknownElement(String),
    #[error("singleton {{{0}}} is not independent; every singleton must be")]
    SingletonMissing(String),
    #[error("closure would exceed {0} sets")]
    ClosureTooLarge(usize),
}

pub const MAX_GROUND_ELEMENTS: usize = 24;
const MAX_CLOSURE_SETS: usize = 1 << 20;

/// Ground set plus an explicit hereditary family of independent sets,
/// stored as bitmasks over the ground-set order.
#[derive(Debug, Clone)]
pub struct IndependenceSystem {
    ground: Vec<String>,
    sets: Vec<u32>,
}

impl IndependenceSystem {
    /// Builds from an explicitly closed family; rejects non-hereditary input
    /// and a missing empty set.
    pub fn from_closed_family(
        ground: Vec<String>,
        sets: &[Vec<String>],
    ) -> Result<Self, IndependenceSystemError> {
        let (masks, ground) = resolve_masks(ground, sets)?;
        let present: BTreeSet<u32> = masks.iter().copied().collect();
        if !present.contains(&0) {
            return Err(IndependenceSystemError::EmptySetMissing);
        }
        for &m in &present {
            let mut bits = m;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                if !present.contains(&(m ^ b)) {
                    return Err(IndependenceSystemError::NotHereditary {
                        superset: mask_to_names(m, &ground),
                        subset: mask_to_names(m ^ b, &ground),
                    });
                }
            }
        }
        Ok(IndependenceSystem {
            ground,
            sets: present.into_iter().collect(),
        })
    }

    /// Builds the downward closure of the given generating sets (the empty
    /// set is always included).
    pub fn from_generators(
        ground: Vec<String>,
        sets: &[Vec<String>],
    ) -> Result<Self, IndependenceSystemError> {
        let (masks, ground) = resolve_masks(ground, sets)?;
        let mut closed: BTreeSet<u32> = BTreeSet::new();
        closed.insert(0);
        let mut stack: Vec<u32> = masks;
        while let Some(m) = stack.pop() {
            if !closed.insert(m) {
                continue;
            }
            if closed.len() > MAX_CLOSURE_SETS {
                return Err(IndependenceSystemError::ClosureTooLarge(MAX_CLOSURE_SETS));
            }
            let mut bits = m;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                stack.push(m ^ b);
            }
        }
        Ok(IndependenceSystem {
            ground,
            sets: closed.into_iter().collect(),
        })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    pub fn sets_as_masks(&self) -> &[u32] {
        &self.sets
    }

    /// Inclusion-maximal members of the family.
    pub fn maximal_sets(&self) -> Vec<u32> {
        self.sets
            .iter()
            .copied()
            .filter(|&m| {
                !self
                    .sets
                    .iter()
                    .any(|&other| other != m && (other & m) == m)
            })
            .collect()
    }

    /// Every singleton independent? Required for the fractional chromatic
    /// number of the system to be defined.
    pub fn missing_singleton(&self) -> Option<&str> {
        (0..self.ground.len())
            .find(|&i| !self.contains_mask(1 << i))
            .map(|i| self.ground[i].as_str())
    }

    pub fn names_of(&self, mask: u32) -> Vec<String> {
        mask_to_names(mask, &self.ground)
    }
}

fn resolve_masks(
    ground: Vec<String>,
    sets: &[Vec<String>],
) -> Result<(Vec<u32>, Vec<String>), IndependenceSystemError> {
    if ground.len() > MAX_GROUND_ELEMENTS {
        return Err(IndependenceSystemError::TooLarge {
            got: ground.len(),
            cap: MAX_GROUND_ELEMENTS,
        });
    }
    let index: std::collections::HashMap<&str, usize> = ground
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_str(), i))
        .collect();
    let mut masks = Vec::with_capacity(sets.len());
    for s in sets {
        let mut m = 0u32;
        for name in s {
            let i = index
                .get(name.as_str())
                .ok_or_else(|| IndependenceSystemError::UnknownElement(name.clone()))?;
            m |= 1 << i;
        }
        masks.push(m);
    }
    Ok((masks, ground))
}

fn mask_to_names(mask: u32, ground: &[String]) -> Vec<String> {
    (0..ground.len())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| ground[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_from_generators() {
        let sys = IndependenceSystem::from_generators(
            names(&["a", "b", "c"]),
            &[names(&["a", "b"]), names(&["c"])],
        )
        .unwrap();
        // {}, {a}, {b}, {c}, {a,b}
        assert_eq!(sys.set_count(), 5);
        assert!(sys.contains_mask(0));
        assert!(sys.contains_mask(0b011));
        assert!(!sys.contains_mask(0b101));
        assert_eq!(sys.maximal_sets(), vec![0b011, 0b100]);
    }

    #[test]
    fn hereditary_check_rejects_holes() {
        let err = IndependenceSystem::from_closed_family(
            names(&["a", "b"]),
            &[vec![], names(&["a", "b"])],
        )
        .unwrap_err();
        assert!(matches!(err, IndependenceSystemError::NotHereditary { .. }));
    }

    #[test]
    fn empty_set_required() {
        let err =
            IndependenceSystem::from_closed_family(names(&["a"]), &[names(&["a"])]).unwrap_err();
        assert!(matches!(err, IndependenceSystemError::EmptySetMissing));
    }

    #[test]
    fn singleton_detection() {
        let sys =
            IndependenceSystem::from_generators(names(&["a", "b"]), &[names(&["a"])]).unwrap();
        assert_eq!(sys.missing_singleton(), Some("b"));
    }
}
