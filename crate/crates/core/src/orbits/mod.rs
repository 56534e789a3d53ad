//! Group actions on finite sets: the orbit-counting average, the
//! subgroup-orbit inequality, and the machinery both are checked against.

mod gl;
mod torsion;

pub use gl::{gcd_identity_check, glr_orbit_count, orbit_invariant, GcdIdentity, GlMethod, OrdProfile};
pub use torsion::{orbit_average_estimate, TorsionActionReport, TorsionRow};

use std::collections::HashSet;

use crate::error::{Error, Result};

pub const CLOSURE_CAP: usize = 1_000_000;

/// A finite group given by its full element list, acting on {0, .., k-1}.
/// Each element is a permutation written as an image array. Construction
/// verifies the identity is present and the list is closed under
/// composition and inverses.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    set_size: usize,
    elements: Vec<Vec<usize>>,
}

fn is_permutation(perm: &[usize], set_size: usize) -> bool {
    if perm.len() != set_size {
        return false;
    }
    let mut seen = vec![false; set_size];
    for &image in perm {
        if image >= set_size || seen[image] {
            return false;
        }
        seen[image] = true;
    }
    true
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (x, &image) in perm.iter().enumerate() {
        inv[image] = x;
    }
    inv
}

impl FiniteAction {
    pub fn new(set_size: usize, elements: Vec<Vec<usize>>) -> Result<Self> {
        if set_size == 0 || elements.is_empty() {
            return Err(Error::ZeroArgument);
        }
        for perm in &elements {
            if !is_permutation(perm, set_size) {
                return Err(Error::BadPermutation);
            }
        }
        let members: HashSet<&[usize]> = elements.iter().map(Vec::as_slice).collect();
        if members.len() != elements.len() {
            return Err(Error::BadPermutation);
        }
        let identity: Vec<usize> = (0..set_size).collect();
        if !members.contains(identity.as_slice()) {
            return Err(Error::MissingIdentity);
        }
        for a in &elements {
            if !members.contains(invert(a).as_slice()) {
                return Err(Error::NotClosed);
            }
            for b in &elements {
                if !members.contains(compose(a, b).as_slice()) {
                    return Err(Error::NotClosed);
                }
            }
        }
        Ok(FiniteAction { set_size, elements })
    }

    /// Close a generator list under composition, capped to keep runaway
    /// generator sets from exhausting memory.
    pub fn from_generators(set_size: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for perm in generators {
            if !is_permutation(perm, set_size) {
                return Err(Error::BadPermutation);
            }
        }
        let identity: Vec<usize> = (0..set_size).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
        let mut frontier = vec![identity];
        while let Some(current) = frontier.pop() {
            for generator in generators {
                let next = compose(generator, &current);
                if seen.insert(next.clone()) {
                    if seen.len() > CLOSURE_CAP {
                        return Err(Error::ClosureCap(CLOSURE_CAP));
                    }
                    frontier.push(next);
                }
            }
        }
        let mut elements: Vec<Vec<usize>> = seen.into_iter().collect();
        elements.sort();
        FiniteAction::new(set_size, elements)
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn fixed_points(&self, perm: &[usize]) -> usize {
        perm.iter().enumerate().filter(|(x, &image)| *x == image).count()
    }

    /// Number of orbits as the average number of fixed points over the
    /// group. The average is an exact integer for every valid action.
    pub fn burnside_orbit_count(&self) -> u64 {
        let total: u64 = self
            .elements
            .iter()
            .map(|perm| self.fixed_points(perm) as u64)
            .sum();
        let order = self.order() as u64;
        assert_eq!(total % order, 0, "fixed-point average must be an integer");
        total / order
    }

    /// Independent orbit count by explicit partitioning (union-find).
    pub fn orbit_count_partition(&self) -> u64 {
        let mut dsu = DisjointSets::new(self.set_size);
        for perm in &self.elements {
            for (x, &image) in perm.iter().enumerate() {
                dsu.union(x, image);
            }
        }
        dsu.count() as u64
    }

    fn stabilizer_size(&self, x: usize) -> usize {
        self.elements.iter().filter(|perm| perm[x] == x).count()
    }
}

/// Orbit comparison between a group and one of its subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupOrbitReport {
    pub h_orbits: u64,
    pub g_orbits: u64,
    pub index: u64,
    pub equality_holds: bool,
    pub stabilizers_match: bool,
}

/// Check the subgroup-orbit inequality
/// (H-orbits) <= (G : H) * (G-orbits), which is an equality exactly when
/// H_x = G_x for every x. Both the inequality and the biconditional are
/// asserted; `h_elements` must form a subgroup of `g`.
pub fn subgroup_orbit_check(
    g: &FiniteAction,
    h_elements: &[Vec<usize>],
) -> Result<SubgroupOrbitReport> {
    let members: HashSet<&[usize]> = g.elements.iter().map(Vec::as_slice).collect();
    if h_elements.iter().any(|e| !members.contains(e.as_slice())) {
        return Err(Error::NotASubgroup);
    }
    let h = FiniteAction::new(g.set_size, h_elements.to_vec()).map_err(|_| Error::NotASubgroup)?;
    if g.order() % h.order() != 0 {
        return Err(Error::NotASubgroup);
    }
    let index = (g.order() / h.order()) as u64;
    let h_orbits = h.orbit_count_partition();
    let g_orbits = g.orbit_count_partition();
    assert!(
        h_orbits <= index * g_orbits,
        "subgroup-orbit inequality violated"
    );
    let equality_holds = h_orbits == index * g_orbits;
    let stabilizers_match = (0..g.set_size).all(|x| h.stabilizer_size(x) == g.stabilizer_size(x));
    assert_eq!(
        equality_holds, stabilizers_match,
        "equality must hold exactly when every stabilizer matches"
    );
    Ok(SubgroupOrbitReport {
        h_orbits,
        g_orbits,
        index,
        equality_holds,
        stabilizers_match,
    })
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// The symmetric group on 3 points from two generators.
    pub fn s3_natural() -> FiniteAction {
        FiniteAction::from_generators(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    /// S3 acting on its own 6 elements by conjugation.
    pub fn s3_conjugation() -> FiniteAction {
        let natural = s3_natural();
        let elements = natural.elements().to_vec();
        let index_of = |perm: &[usize]| -> usize {
            elements.iter().position(|e| e == perm).unwrap()
        };
        let action: Vec<Vec<usize>> = elements
            .iter()
            .map(|sigma| {
                let sigma_inv = invert(sigma);
                elements
                    .iter()
                    .map(|tau| index_of(&compose(&compose(sigma, tau), &sigma_inv)))
                    .collect()
            })
            .collect();
        FiniteAction::new(6, action).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    fn identity(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn burnside_examples() {
        // trivial group on 7 points
        let trivial = FiniteAction::new(7, vec![identity(7)]).unwrap();
        assert_eq!(trivial.burnside_orbit_count(), 7);
        assert_eq!(trivial.orbit_count_partition(), 7);
        // C2 swapping two points
        let swap = FiniteAction::new(2, vec![identity(2), vec![1, 0]]).unwrap();
        assert_eq!(swap.burnside_orbit_count(), 1);
        // S3 on itself by conjugation: one orbit per conjugacy class
        let conj = s3_conjugation();
        assert_eq!(conj.order(), 6);
        assert_eq!(conj.burnside_orbit_count(), 3);
        assert_eq!(conj.orbit_count_partition(), 3);
    }

    #[test]
    fn construction_rejects_bad_lists() {
        assert!(matches!(
            FiniteAction::new(3, vec![vec![1, 2, 0]]),
            Err(Error::MissingIdentity)
        ));
        assert!(matches!(
            FiniteAction::new(3, vec![identity(3), vec![1, 1, 0]]),
            Err(Error::BadPermutation)
        ));
        // missing the inverse/closure of a 3-cycle
        assert!(matches!(
            FiniteAction::new(3, vec![identity(3), vec![1, 2, 0]]),
            Err(Error::NotClosed)
        ));
    }

    #[test]
    fn generator_closure_builds_s3() {
        let s3 = s3_natural();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.burnside_orbit_count(), 1);
    }

    #[test]
    fn subgroup_examples() {
        // G = C2 swap on two points, H trivial
        let g = FiniteAction::new(2, vec![identity(2), vec![1, 0]]).unwrap();
        let report = subgroup_orbit_check(&g, &[identity(2)]).unwrap();
        assert_eq!(
            report,
            SubgroupOrbitReport {
                h_orbits: 2,
                g_orbits: 1,
                index: 2,
                equality_holds: true,
                stabilizers_match: true,
            }
        );
        // H = G: equality trivially
        let s3 = s3_natural();
        let full = subgroup_orbit_check(&s3, &s3.elements().to_vec()).unwrap();
        assert!(full.equality_holds && full.stabilizers_match);
        assert_eq!(full.index, 1);
        // H = C3 inside S3 on 3 points: 1 <= 2 * 1 strictly, stabilizers differ
        let c3: Vec<Vec<usize>> = vec![identity(3), vec![1, 2, 0], vec![2, 0, 1]];
        let report = subgroup_orbit_check(&s3, &c3).unwrap();
        assert_eq!((report.h_orbits, report.g_orbits, report.index), (1, 1, 2));
        assert!(!report.equality_holds);
        assert!(!report.stabilizers_match);
        // not a subgroup: missing closure
        assert!(matches!(
            subgroup_orbit_check(&s3, &[identity(3), vec![1, 2, 0]]),
            Err(Error::NotASubgroup)
        ));
        // not even a subset: a transposition is outside C3
        let c3_group = FiniteAction::new(3, c3).unwrap();
        assert!(matches!(
            subgroup_orbit_check(&c3_group, &[identity(3), vec![1, 0, 2]]),
            Err(Error::NotASubgroup)
        ));
    }
}
