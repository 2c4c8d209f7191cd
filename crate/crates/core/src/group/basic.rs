use serde::{Deserialize, Serialize};

use super::{Group, ZProjection};

/// The integers under addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Group for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inv(&self, a: &i64) -> i64 {
        -a
    }

    fn key(&self, a: &i64) -> String {
        a.to_string()
    }

    fn conj(&self, a: &i64, _g: &i64) -> i64 {
        *a
    }
}

impl ZProjection for Integers {
    fn phi(&self, a: &i64) -> i64 {
        *a
    }

    fn lift(&self, x: i64) -> i64 {
        x
    }
}

/// Z/mZ with residues kept in `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclic {
    pub m: i64,
}

impl Cyclic {
    pub fn new(m: i64) -> Self {
        assert!(m >= 1, "cyclic group needs m >= 1");
        Self { m }
    }

    pub fn reduce(&self, x: i64) -> i64 {
        x.rem_euclid(self.m)
    }
}

impl Group for Cyclic {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        (a + b).rem_euclid(self.m)
    }

    fn inv(&self, a: &i64) -> i64 {
        (-a).rem_euclid(self.m)
    }

    fn key(&self, a: &i64) -> String {
        a.to_string()
    }

    fn contains(&self, a: &i64) -> bool {
        (0..self.m).contains(a)
    }

    fn conj(&self, a: &i64, _g: &i64) -> i64 {
        *a
    }
}

/// Z^d under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub dim: usize,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn unit(&self, axis: usize, sign: i64) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        v[axis] = sign;
        v
    }
}

impl Group for Lattice {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn key(&self, a: &Vec<i64>) -> String {
        a.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    fn contains(&self, a: &Vec<i64>) -> bool {
        a.len() == self.dim
    }

    fn conj(&self, a: &Vec<i64>, _g: &Vec<i64>) -> Vec<i64> {
        a.clone()
    }
}

/// An element of the infinite dihedral group, read as the affine map
/// `x -> sign * x + shift` of the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElem {
    pub shift: i64,
    pub flip: bool,
}

impl DihedralElem {
    pub const IDENTITY: Self = Self { shift: 0, flip: false };

    pub fn translation(shift: i64) -> Self {
        Self { shift, flip: false }
    }

    pub fn reflection(shift: i64) -> Self {
        Self { shift, flip: true }
    }

    fn sign(&self) -> i64 {
        if self.flip {
            -1
        } else {
            1
        }
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.sign() * x + self.shift
    }
}

/// The infinite dihedral group D∞. Products act on the right: `(ab)(x) = b(a(x))`.
///
/// The marked involutions are `a: x -> -x` and `b: x -> 1 - x`, so `ab` is
/// translation by one and `abab` generates the kernel onto `Z/2 x Z/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InfiniteDihedral;

impl InfiniteDihedral {
    pub fn a(&self) -> DihedralElem {
        DihedralElem::reflection(0)
    }

    pub fn b(&self) -> DihedralElem {
        DihedralElem::reflection(1)
    }

    /// Image in `Z/2 x Z/2` under `a -> (1,0)`, `b -> (0,1)`.
    pub fn abelian_image(&self, g: &DihedralElem) -> (u8, u8) {
        let odd = g.shift.rem_euclid(2) == 1;
        match (g.flip, odd) {
            (false, false) => (0, 0),
            (false, true) => (1, 1),
            (true, false) => (1, 0),
            (true, true) => (0, 1),
        }
    }
}

impl Group for InfiniteDihedral {
    type Elem = DihedralElem;

    fn identity(&self) -> DihedralElem {
        DihedralElem::IDENTITY
    }

    fn mul(&self, a: &DihedralElem, b: &DihedralElem) -> DihedralElem {
        DihedralElem {
            shift: b.sign() * a.shift + b.shift,
            flip: a.flip != b.flip,
        }
    }

    fn inv(&self, a: &DihedralElem) -> DihedralElem {
        DihedralElem {
            shift: -a.sign() * a.shift,
            flip: a.flip,
        }
    }

    fn key(&self, a: &DihedralElem) -> String {
        format!("{}{}", a.shift, if a.flip { '-' } else { '+' })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_products_match_affine_composition() {
        let d = InfiniteDihedral;
        let elems = [
            DihedralElem::translation(3),
            DihedralElem::reflection(-2),
            DihedralElem::reflection(5),
            DihedralElem::translation(-7),
        ];
        for a in &elems {
            for b in &elems {
                let ab = d.mul(a, b);
                for x in -5..5 {
                    assert_eq!(ab.apply(x), b.apply(a.apply(x)));
                }
            }
            assert_eq!(d.mul(a, &d.inv(a)), d.identity());
        }
    }

    #[test]
    fn abab_is_translation_by_two() {
        let d = InfiniteDihedral;
        let abab = d.product(&[d.a(), d.b(), d.a(), d.b()]);
        assert_eq!(abab, DihedralElem::translation(2));
        assert_eq!(d.abelian_image(&abab), (0, 0));
        // conjugacy class of abab is {abab, (abab)^-1}
        assert_eq!(d.conj(&abab, &d.a()), DihedralElem::translation(-2));
        assert_eq!(d.conj(&abab, &d.b()), DihedralElem::translation(-2));
    }

    #[test]
    fn abelian_image_is_a_homomorphism() {
        let d = InfiniteDihedral;
        for s1 in -4..4 {
            for s2 in -4..4 {
                for f1 in [false, true] {
                    for f2 in [false, true] {
                        let x = DihedralElem { shift: s1, flip: f1 };
                        let y = DihedralElem { shift: s2, flip: f2 };
                        let (a1, b1) = d.abelian_image(&x);
                        let (a2, b2) = d.abelian_image(&y);
                        assert_eq!(d.abelian_image(&d.mul(&x, &y)), (a1 ^ a2, b1 ^ b2));
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_reduces() {
        let c = Cyclic::new(8);
        assert_eq!(c.mul(&5, &6), 3);
        assert_eq!(c.inv(&3), 5);
        assert!(!c.contains(&8));
    }
}
