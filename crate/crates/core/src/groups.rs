//! Finite abelian groups, their characters, cocycle extensions of Z_r, and
//! the gerbe target data for orbifold curves with cyclic isotropy r over 0
//! and s over infinity.

use crate::algebra::{rat, Cyc, Rat};
use crate::{Error, Result};

/// K = direct sum of Z_{n_j}; elements are residue tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
}

/// An element of a [`FiniteAbelianGroup`], componentwise residues.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KElem(Vec<u64>);

impl KElem {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn text(&self) -> String {
        if self.0.is_empty() {
            "0".to_string()
        } else {
            self.0
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Index of an irreducible character of K; gamma(k) = prod zeta_{n_j}^{g_j k_j}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterIndex(Vec<u64>);

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        assert!(moduli.iter().all(|&n| n >= 1));
        FiniteAbelianGroup { moduli }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { moduli: Vec::new() }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |a, &n| num_integer::lcm(a, n))
    }

    pub fn zero(&self) -> KElem {
        KElem(vec![0; self.moduli.len()])
    }

    pub fn elem(&self, residues: &[i64]) -> KElem {
        assert_eq!(residues.len(), self.moduli.len(), "element shape mismatch");
        KElem(
            residues
                .iter()
                .zip(self.moduli.iter())
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        KElem(
            a.0.iter()
                .zip(b.0.iter())
                .zip(self.moduli.iter())
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        KElem(
            a.0.iter()
                .zip(self.moduli.iter())
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        self.add(a, &self.neg(b))
    }

    /// n * a for any integer n.
    pub fn scale(&self, n: i64, a: &KElem) -> KElem {
        KElem(
            a.0.iter()
                .zip(self.moduli.iter())
                .map(|(&x, &m)| ((x as i64 * n).rem_euclid(m as i64)) as u64)
                .collect(),
        )
    }

    pub fn elements(&self) -> Vec<KElem> {
        let mut out = vec![KElem(Vec::new())];
        for &n in &self.moduli {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for x in 0..n {
                    let mut v = e.0.clone();
                    v.push(x);
                    next.push(KElem(v));
                }
            }
            out = next;
        }
        out
    }

    pub fn characters(&self) -> Vec<CharacterIndex> {
        self.elements().into_iter().map(|e| CharacterIndex(e.0)).collect()
    }

    pub fn trivial_character(&self) -> CharacterIndex {
        CharacterIndex(vec![0; self.moduli.len()])
    }
}

impl CharacterIndex {
    pub fn indices(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// The exponent of gamma(k) as an element of Q/Z, i.e. gamma(k) =
    /// e^(2 pi i * exponent). Exposing the exponent (not just the value)
    /// lets callers take canonical fractional powers of character values.
    pub fn exponent(&self, group: &FiniteAbelianGroup, k: &KElem) -> Result<Rat> {
        if self.0.len() != k.0.len() || k.0.len() != group.moduli.len() {
            return Err(Error::ShapeMismatch(format!(
                "character of rank {} applied to element of rank {}",
                self.0.len(),
                k.0.len()
            )));
        }
        let mut e = rat(0);
        for ((&g, &x), &n) in self.0.iter().zip(k.0.iter()).zip(group.moduli.iter()) {
            e = e + Rat::new(((g * x) % n).into(), n.into());
        }
        Ok(e)
    }

    pub fn value(&self, group: &FiniteAbelianGroup, k: &KElem) -> Result<Cyc> {
        Ok(Cyc::phase(&self.exponent(group, k)?))
    }
}

/// Convenience wrapper matching the operation contract.
pub fn character_value(
    gamma: &CharacterIndex,
    group: &FiniteAbelianGroup,
    k: &KElem,
) -> Result<Cyc> {
    gamma.value(group, k)
}

/// delta_r(x): 1 if x = 0 mod r, else 0.
pub fn delta_r(x: i64, r: u64) -> i64 {
    if x.rem_euclid(r as i64) == 0 {
        1
    } else {
        0
    }
}

/// delta_r^vee(x) = 1 - delta_r(x).
pub fn delta_r_vee(x: i64, r: u64) -> i64 {
    1 - delta_r(x, r)
}

/// The extension R = Z_r x_k K given by the step 2-cocycle with value `twist`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleExtension {
    pub r: u64,
    pub k_group: FiniteAbelianGroup,
    pub twist: KElem,
}

/// An element (a, k) of a cocycle extension, a reduced into [0, r).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RElem {
    pub a: u64,
    pub k: KElem,
}

impl CocycleExtension {
    pub fn new(r: u64, k_group: FiniteAbelianGroup, twist: KElem) -> Self {
        assert!(r >= 1);
        CocycleExtension { r, k_group, twist }
    }

    pub fn order(&self) -> u64 {
        self.r * self.k_group.order()
    }

    pub fn zero(&self) -> RElem {
        RElem {
            a: 0,
            k: self.k_group.zero(),
        }
    }

    pub fn elem(&self, a: i64, k: KElem) -> RElem {
        RElem {
            a: a.rem_euclid(self.r as i64) as u64,
            k,
        }
    }

    /// (a,k) + (b,h) = (a+b mod r, k+h+[a+b >= r] twist).
    pub fn add(&self, x: &RElem, y: &RElem) -> RElem {
        let sum = x.a + y.a;
        let mut k = self.k_group.add(&x.k, &y.k);
        if sum >= self.r {
            k = self.k_group.add(&k, &self.twist);
        }
        RElem {
            a: sum % self.r,
            k,
        }
    }

    /// -(a,k) = (-a, -k - delta^vee_r(a) twist).
    pub fn neg(&self, x: &RElem) -> RElem {
        let mut k = self.k_group.neg(&x.k);
        if delta_r_vee(x.a as i64, self.r) == 1 {
            k = self.k_group.sub(&k, &self.twist);
        }
        RElem {
            a: (self.r - x.a) % self.r,
            k,
        }
    }

    pub fn sum(&self, xs: &[RElem]) -> RElem {
        xs.iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn is_zero(&self, x: &RElem) -> bool {
        x.a == 0 && x.k.is_zero()
    }

    /// True when the element lies in the kernel K of the projection to Z_r.
    pub fn in_k(&self, x: &RElem) -> bool {
        x.a == 0
    }

    pub fn elements(&self) -> Vec<RElem> {
        let mut out = Vec::new();
        for a in 0..self.r {
            for k in self.k_group.elements() {
                out.push(RElem { a, k });
            }
        }
        out
    }
}

/// Target datum: the orbifold curve with isotropy Z_r over 0, Z_s over
/// infinity, a banded K-gerbe with cocycle data k0, kinf and twisting
/// element L from the line-bundle weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerbeTarget {
    pub r: u64,
    pub s: u64,
    pub k: FiniteAbelianGroup,
    pub k0: KElem,
    pub kinf: KElem,
    pub l: KElem,
}

/// Which fixed point a tuple of insertions sits over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Zero,
    Infinity,
}

impl GerbeTarget {
    pub fn trivial_gerbe(r: u64, s: u64) -> Self {
        let k = FiniteAbelianGroup::trivial();
        let z = k.zero();
        GerbeTarget {
            r,
            s,
            k,
            k0: z.clone(),
            kinf: z.clone(),
            l: z,
        }
    }

    pub fn new(r: u64, s: u64, k: FiniteAbelianGroup, k0: KElem, kinf: KElem, l: KElem) -> Self {
        GerbeTarget { r, s, k, k0, kinf, l }
    }

    /// The isotropy extension over the given fixed point.
    pub fn extension(&self, side: Side) -> CocycleExtension {
        match side {
            Side::Zero => CocycleExtension::new(self.r, self.k.clone(), self.k0.clone()),
            Side::Infinity => CocycleExtension::new(self.s, self.k.clone(), self.kinf.clone()),
        }
    }

    pub fn cyclic_order(&self, side: Side) -> u64 {
        match side {
            Side::Zero => self.r,
            Side::Infinity => self.s,
        }
    }
}

/// Vertex-side node monodromies of a degree-d edge carrying gerbe label k:
/// rho over 0 and sigma over infinity.
pub fn edge_monodromies(d: u64, k: &KElem, x: &GerbeTarget) -> (RElem, RElem) {
    assert!(d >= 1);
    let d = d as i64;
    let kg = &x.k;
    let r = x.r as i64;
    let s = x.s as i64;
    // sigma = (-d mod s, k + floor(-d/s) kinf)
    let sigma_k = kg.add(k, &kg.scale((-d).div_euclid(s), &x.kinf));
    let sigma = RElem {
        a: (-d).rem_euclid(s) as u64,
        k: sigma_k,
    };
    // rho = (-d mod r, -k - d L + floor(-d/r) k0)
    let rho_k = kg.add(
        &kg.sub(&kg.neg(k), &kg.scale(d, &x.l)),
        &kg.scale((-d).div_euclid(r), &x.k0),
    );
    let rho = RElem {
        a: (-d).rem_euclid(r) as u64,
        k: rho_k,
    };
    (rho, sigma)
}

/// The gerbe monodromy constraint. True iff u + v = d L + floor(d/r) k0 +
/// floor(d/s) kinf in K, for u, v the edge-side K-parts over 0 and infinity.
pub fn gerbe_constraint(d: u64, u: &KElem, v: &KElem, x: &GerbeTarget) -> bool {
    let d = d as i64;
    let kg = &x.k;
    let rhs = kg.add(
        &kg.add(&kg.scale(d, &x.l), &kg.scale(d.div_euclid(x.r as i64), &x.k0)),
        &kg.scale(d.div_euclid(x.s as i64), &x.kinf),
    );
    kg.add(u, v) == rhs
}

/// Moduli of the classifying group of banded Z_n gerbes on the curve with
/// isotropy orders (r, s): Z_n + Z_q with q = gcd(r, s, n).
pub fn banded_gerbe_group(r: u64, s: u64, n: u64) -> (u64, u64) {
    assert!(n >= 1);
    (n, num_integer::gcd(num_integer::gcd(r, s), n))
}

/// Ranks of the weight-(1/r) Hodge subbundle over the space of covers with
/// the given marked monodromies, per class of component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDims {
    /// Components whose total monodromy does not lie in K.
    pub generic: i64,
    /// Components with monodromy inside K, when the marked data allows them
    /// (all effective parts zero).
    pub in_k: Option<i64>,
}

/// Orbifold Riemann-Roch rank g - 1 + age + delta_K of the distinguished
/// Hodge subbundle; errors if the tuple is not balanced in the extension.
pub fn hodge_dimension(
    g: u64,
    tuple: &[RElem],
    x: &GerbeTarget,
    side: Side,
) -> Result<HodgeDims> {
    let ext = x.extension(side);
    if !ext.is_zero(&ext.sum(tuple)) {
        return Err(Error::UnbalancedMonodromy);
    }
    let r = ext.r;
    let iota = crate::partitions::age(
        &tuple.iter().map(|e| e.a as i64).collect::<Vec<_>>(),
        r,
    );
    // balanced tuples have integral age
    assert!(iota.is_integer());
    let iota: i64 = {
        use num_traits::ToPrimitive;
        iota.to_integer().to_i64().unwrap()
    };
    let base = g as i64 - 1 + iota;
    let all_effective_zero = tuple.iter().all(|e| e.a == 0);
    Ok(HodgeDims {
        generic: base,
        in_k: if all_effective_zero { Some(base + 1) } else { None },
    })
}
