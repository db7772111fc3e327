//! Constituent pools and decomposable elements.
//!
//! Two backends share one interface. The polynomial backend realizes the
//! ideal lattice of `F_p[X]`: constituents are monic irreducible generators
//! of prime ideals, and the meet of a set of them is the ideal generated by
//! their product. The abstract backend treats `{0, .., n-1}` as a set of
//! labeled constituents and a decomposable element as the subset itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf_poly::{GfError, Polynomial, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoolError {
    #[error("constituent pool is empty")]
    EmptyPool,
    #[error("constituent {index} is not irreducible")]
    Reducible { index: usize },
    #[error("constituent {index} is not monic")]
    NotMonic { index: usize },
    #[error("constituents {a} and {b} are associate")]
    Associate { a: usize, b: usize },
    #[error("constituent {index} is over F_{found}, pool is over F_{expected}")]
    MixedFields {
        index: usize,
        expected: u64,
        found: u64,
    },
    #[error("empty index subset")]
    EmptySubset,
    #[error("index {index} out of range for pool of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("indices must be strictly increasing (saw {prev} then {next})")]
    NotStrictlyIncreasing { prev: usize, next: usize },
    #[error("element does not belong to this pool's backend")]
    BackendMismatch,
    #[error("element has a factor outside the pool: {remaining}")]
    NotDecomposable { remaining: String },
    #[error("constituent {index} divides the element more than once")]
    NotSquarefree { index: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    PolynomialIdeal {
        field: PrimeField,
        constituents: Vec<Polynomial>,
    },
    AbstractSet {
        n: usize,
    },
}

/// An indexed set of pairwise non-dividing constituents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstituentPool {
    backend: Backend,
}

/// A meet of distinct pool constituents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecomposableElement {
    /// Generator of the radical ideal, the product of the chosen constituents.
    Generator(Polynomial),
    Subset(Vec<usize>),
}

impl DecomposableElement {
    /// Hex form of a binary generator, `None` otherwise.
    pub fn hex(&self) -> Option<String> {
        match self {
            DecomposableElement::Generator(p) => p.to_hex().ok(),
            DecomposableElement::Subset(_) => None,
        }
    }
}

impl ConstituentPool {
    /// Validates eagerly: every constituent monic and irreducible, all over
    /// one field, pairwise distinct (for monic irreducibles, non-associate is
    /// the same as distinct).
    pub fn polynomial(constituents: Vec<Polynomial>) -> Result<Self, PoolError> {
        let field = constituents.first().ok_or(PoolError::EmptyPool)?.field();
        for (index, c) in constituents.iter().enumerate() {
            if c.field() != field {
                return Err(PoolError::MixedFields {
                    index,
                    expected: field.modulus(),
                    found: c.field().modulus(),
                });
            }
            if !c.is_irreducible().map_err(|_| PoolError::Reducible { index })? {
                return Err(PoolError::Reducible { index });
            }
            if !c.is_monic() {
                return Err(PoolError::NotMonic { index });
            }
        }
        for a in 0..constituents.len() {
            for b in a + 1..constituents.len() {
                if constituents[a] == constituents[b] {
                    return Err(PoolError::Associate { a, b });
                }
            }
        }
        Ok(ConstituentPool {
            backend: Backend::PolynomialIdeal {
                field,
                constituents,
            },
        })
    }

    pub fn abstract_set(n: usize) -> Result<Self, PoolError> {
        if n == 0 {
            return Err(PoolError::EmptyPool);
        }
        Ok(ConstituentPool {
            backend: Backend::AbstractSet { n },
        })
    }

    /// The seven binary irreducibles `X^2+X+1, X^3+X+1, X^3+X^2+1, X^4+X+1,
    /// X^4+X^3+1, X^5+X^2+1, X^6+X+1` in that order.
    pub fn example_binary() -> Self {
        let hexes = ["7", "B", "D", "13", "19", "25", "43"];
        let polys = hexes
            .iter()
            .map(|h| Polynomial::from_hex(h, PrimeField::binary()).expect("valid hex"))
            .collect();
        ConstituentPool::polynomial(polys).expect("example pool is valid")
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn len(&self) -> usize {
        match &self.backend {
            Backend::PolynomialIdeal { constituents, .. } => constituents.len(),
            Backend::AbstractSet { n } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn constituents(&self) -> Option<&[Polynomial]> {
        match &self.backend {
            Backend::PolynomialIdeal { constituents, .. } => Some(constituents),
            Backend::AbstractSet { .. } => None,
        }
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), PoolError> {
        if subset.is_empty() {
            return Err(PoolError::EmptySubset);
        }
        let n = self.len();
        for w in subset.windows(2) {
            if w[1] <= w[0] {
                return Err(PoolError::NotStrictlyIncreasing {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        if let Some(&index) = subset.iter().find(|&&i| i >= n) {
            return Err(PoolError::IndexOutOfRange { index, n });
        }
        Ok(())
    }

    /// Meet of the selected constituents.
    pub fn compose(&self, subset: &[usize]) -> Result<DecomposableElement, PoolError> {
        self.check_subset(subset)?;
        match &self.backend {
            Backend::PolynomialIdeal {
                field,
                constituents,
            } => {
                let mut acc = Polynomial::one(*field);
                for &i in subset {
                    acc = acc.mul(&constituents[i])?;
                }
                Ok(DecomposableElement::Generator(acc))
            }
            Backend::AbstractSet { .. } => Ok(DecomposableElement::Subset(subset.to_vec())),
        }
    }

    /// Recovers the unique constituent subset by trial division. A nonzero
    /// constant left over is a unit and is ignored, so `c * f` decomposes like
    /// `f`; the unit ideal decomposes to the empty set.
    pub fn decompose(&self, element: &DecomposableElement) -> Result<Vec<usize>, PoolError> {
        match (&self.backend, element) {
            (
                Backend::PolynomialIdeal {
                    field,
                    constituents,
                },
                DecomposableElement::Generator(g),
            ) => {
                if g.field() != *field {
                    return Err(GfError::FieldMismatch {
                        left: field.modulus(),
                        right: g.field().modulus(),
                    }
                    .into());
                }
                if g.is_zero() {
                    return Err(PoolError::NotDecomposable {
                        remaining: "0".into(),
                    });
                }
                let mut rest = g.clone();
                let mut found = Vec::new();
                for (index, c) in constituents.iter().enumerate() {
                    let (q, r) = rest.divrem(c)?;
                    if !r.is_zero() {
                        continue;
                    }
                    if q.divisible_by(c)? {
                        return Err(PoolError::NotSquarefree { index });
                    }
                    found.push(index);
                    rest = q;
                }
                if !rest.is_unit() {
                    return Err(PoolError::NotDecomposable {
                        remaining: rest.to_string(),
                    });
                }
                Ok(found)
            }
            (Backend::AbstractSet { .. }, DecomposableElement::Subset(s)) => {
                self.check_subset(s)?;
                Ok(s.clone())
            }
            _ => Err(PoolError::BackendMismatch),
        }
    }

    /// Composes every codeword, in order.
    pub fn full_alphabet<'a, I>(&self, codewords: I) -> Result<Vec<DecomposableElement>, PoolError>
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        codewords.into_iter().map(|c| self.compose(c)).collect()
    }
}

/// On-disk pool description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum PoolFile {
    Poly {
        p: u64,
        constituents: Vec<ConstituentRepr>,
    },
    Set {
        n: usize,
    },
}

/// A constituent is written as a hex string for `p = 2` and as a low-to-high
/// coefficient list otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstituentRepr {
    Hex(String),
    Coeffs(Vec<u64>),
}

impl PoolFile {
    pub fn into_pool(self) -> Result<ConstituentPool, PoolError> {
        match self {
            PoolFile::Poly { p, constituents } => {
                let field = PrimeField::new(p)?;
                let polys = constituents
                    .into_iter()
                    .map(|c| match c {
                        ConstituentRepr::Hex(h) => Polynomial::from_hex(&h, field),
                        ConstituentRepr::Coeffs(v) => Ok(Polynomial::new(field, v)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ConstituentPool::polynomial(polys)
            }
            PoolFile::Set { n } => ConstituentPool::abstract_set(n),
        }
    }
}

impl From<&ConstituentPool> for PoolFile {
    fn from(pool: &ConstituentPool) -> Self {
        match &pool.backend {
            Backend::PolynomialIdeal {
                field,
                constituents,
            } => PoolFile::Poly {
                p: field.modulus(),
                constituents: constituents
                    .iter()
                    .map(|c| match c.to_hex() {
                        Ok(h) => ConstituentRepr::Hex(h),
                        Err(_) => ConstituentRepr::Coeffs(c.coeffs().to_vec()),
                    })
                    .collect(),
            },
            Backend::AbstractSet { n } => PoolFile::Set { n: *n },
        }
    }
}
