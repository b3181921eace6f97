//! Irreducible characters of S_d and of wreath products K wr S_d for
//! finite abelian K, plus the central characters of the distinguished
//! transposition classes.
//!
//! Symmetric group characters are computed by the border-strip recursion on
//! Maya diagrams, the same stone moves that drive the wedge operators, so
//! the two modules cannot drift out of sign conventions. Wreath characters
//! are the coefficients of the basis vectors v_lambda in the creation
//! products P_mu; for complex character labels this convention returns the
//! complex conjugate of the classical table, which is the quantity entering
//! every class-algebra expansion used here.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::algebra::{factorial, rat, Cyc, Rat};
use crate::groups::{CharacterIndex, FiniteAbelianGroup, KElem};
use crate::partitions::{border_strip_remove, KLabeledPartition, Partition};
use crate::{Error, Result};

/// A partition with parts labeled by irreducible characters of K; indexes an
/// irreducible representation of K wr S_d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GStarLabeledPartition {
    parts: Vec<(u64, CharacterIndex)>,
}

impl GStarLabeledPartition {
    pub fn new(mut parts: Vec<(u64, CharacterIndex)>) -> Self {
        parts.retain(|(p, _)| *p > 0);
        parts.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        GStarLabeledPartition { parts }
    }

    pub fn parts(&self) -> &[(u64, CharacterIndex)] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|(p, _)| p).sum()
    }

    /// The sub-partition labeled by a given character.
    pub fn sector(&self, gamma: &CharacterIndex) -> Partition {
        Partition::new(
            self.parts
                .iter()
                .filter(|(_, g)| g == gamma)
                .map(|(p, _)| *p)
                .collect(),
        )
    }

    pub fn text(&self) -> String {
        if self.parts.is_empty() {
            return "-".to_string();
        }
        self.parts
            .iter()
            .map(|(p, g)| {
                let idx = g
                    .indices()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(".");
                format!("{}_g{}", p, if idx.is_empty() { "0".into() } else { idx })
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// All character-labeled partitions of d over K*.
pub fn enumerate_gstar_partitions(
    d: u64,
    group: &FiniteAbelianGroup,
) -> Vec<GStarLabeledPartition> {
    let chars = group.characters();
    let mut out: Vec<GStarLabeledPartition> = Vec::new();
    fn rec(
        remaining: u64,
        chars: &[CharacterIndex],
        idx: usize,
        acc: &mut Vec<(u64, CharacterIndex)>,
        out: &mut Vec<GStarLabeledPartition>,
    ) {
        if idx == chars.len() {
            if remaining == 0 {
                out.push(GStarLabeledPartition::new(acc.clone()));
            }
            return;
        }
        for a in 0..=remaining {
            for lam in crate::partitions::enumerate_partitions(a) {
                let base = acc.len();
                for &p in lam.parts() {
                    acc.push((p, chars[idx].clone()));
                }
                rec(remaining - a, chars, idx + 1, acc, out);
                acc.truncate(base);
            }
        }
    }
    rec(d, &chars, 0, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

type SymKey = (Vec<u64>, Vec<u64>);

static SYM_MEMO: Lazy<RwLock<HashMap<SymKey, BigInt>>> = Lazy::new(|| RwLock::new(HashMap::new()));

fn sym_character_rec(lambda: &Partition, mu_suffix: &[u64]) -> BigInt {
    if mu_suffix.is_empty() {
        return if lambda.is_empty() {
            BigInt::from(1)
        } else {
            BigInt::zero()
        };
    }
    let key: SymKey = (lambda.parts().to_vec(), mu_suffix.to_vec());
    if let Some(v) = SYM_MEMO.read().unwrap().get(&key) {
        return v.clone();
    }
    let m = mu_suffix[0];
    let rest = &mu_suffix[1..];
    let mut total = BigInt::zero();
    for (smaller, sign) in border_strip_remove(lambda, m) {
        total += BigInt::from(sign) * sym_character_rec(&smaller, rest);
    }
    SYM_MEMO.write().unwrap().insert(key, total.clone());
    total
}

/// The irreducible S_d character chi^lambda evaluated on the class mu.
pub fn sym_character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(
            lambda.size() as usize,
            mu.size() as usize,
        ));
    }
    Ok(sym_character_rec(lambda, mu.parts()))
}

/// dim lambda = chi^lambda on the identity class.
pub fn dim_sym(lambda: &Partition) -> BigInt {
    sym_character_rec(lambda, &vec![1; lambda.size() as usize])
}

/// Wreath character value: the coefficient of v_lambdabar in the creation
/// product over the parts of mubar. Reduces to [`sym_character`] for
/// trivial K; satisfies row and column orthogonality with centralizer
/// weights. For labels with complex character values this is the conjugate
/// of the classical character table entry.
pub fn wreath_character(
    lambda: &GStarLabeledPartition,
    mu: &KLabeledPartition,
    group: &FiniteAbelianGroup,
) -> Result<Cyc> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(
            lambda.size() as usize,
            mu.size() as usize,
        ));
    }
    let chars = group.characters();
    let sectors: Vec<Partition> = chars.iter().map(|g| lambda.sector(g)).collect();
    // assign each part of mu to a character sector; accumulate per-sector
    // part lists and the phase prod gamma_i(-c_i)
    struct Ctx<'a> {
        chars: &'a [CharacterIndex],
        sectors: &'a [Partition],
        group: &'a FiniteAbelianGroup,
        mu_parts: &'a [(u64, KElem)],
    }
    fn rec(
        ctx: &Ctx<'_>,
        idx: usize,
        loads: &mut Vec<Vec<u64>>,
        remaining: &mut Vec<u64>,
        phase: Cyc,
        total: &mut Cyc,
    ) -> Result<()> {
        if idx == ctx.mu_parts.len() {
            let mut term = phase;
            for (g, sector) in loads.iter().zip(ctx.sectors.iter()) {
                let class = Partition::new(g.clone());
                let chi = sym_character(sector, &class)?;
                if chi.is_zero() {
                    return Ok(());
                }
                term = term.mul(&Cyc::from_rat(Rat::from_integer(chi)));
            }
            *total += &term;
            return Ok(());
        }
        let (p, c) = &ctx.mu_parts[idx];
        for gi in 0..ctx.chars.len() {
            if *p > remaining[gi] {
                continue;
            }
            let gval = ctx.chars[gi].value(ctx.group, &ctx.group.neg(c))?;
            loads[gi].push(*p);
            remaining[gi] -= *p;
            rec(ctx, idx + 1, loads, remaining, phase.mul(&gval), total)?;
            loads[gi].pop();
            remaining[gi] += *p;
        }
        Ok(())
    }
    let ctx = Ctx {
        chars: &chars,
        sectors: &sectors,
        group,
        mu_parts: mu.parts(),
    };
    let mut total = Cyc::zero();
    let mut loads = vec![Vec::new(); chars.len()];
    let mut remaining: Vec<u64> = sectors.iter().map(|s| s.size()).collect();
    rec(&ctx, 0, &mut loads, &mut remaining, Cyc::one(), &mut total)?;
    Ok(total)
}

/// Dimension of the irreducible indexed by lambdabar:
/// multinomial(d; sector sizes) * prod dim of sector partitions.
pub fn wreath_dim(lambda: &GStarLabeledPartition, group: &FiniteAbelianGroup) -> BigInt {
    let d = lambda.size();
    let mut dim = factorial(d);
    for g in group.characters() {
        let sector = lambda.sector(&g);
        dim = dim / factorial(sector.size()) * Rat::from_integer(dim_sym(&sector));
    }
    assert!(dim.is_integer());
    dim.to_integer()
}

/// Central character of the identity-labeled transposition class:
/// f(lambdabar) = |K| * sum over sectors of the content sum. Always rational.
pub fn central_character_t0(lambda: &GStarLabeledPartition, group: &FiniteAbelianGroup) -> Rat {
    let mut total = 0i64;
    for g in group.characters() {
        total += lambda.sector(&g).content_sum();
    }
    rat(group.order() as i64 * total)
}

/// Central character of the transposition class labeled by c:
/// |K| * sum_gamma gamma(c) * content(lambda^gamma).
pub fn central_character_tc(
    lambda: &GStarLabeledPartition,
    c: &KElem,
    group: &FiniteAbelianGroup,
) -> Result<Cyc> {
    let mut total = Cyc::zero();
    for g in group.characters() {
        let w = g.value(group, c)?;
        total += &w.scale(&rat(lambda.sector(&g).content_sum()));
    }
    Ok(total.scale(&rat(group.order() as i64)))
}
