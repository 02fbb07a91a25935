//! The endomorphism operad `End_V` of `V = F^N`.

use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::{GroupElement, Operad};
use crate::combinatorics::Permutation;
use crate::formal_diffeo::{multisets, tuples, SeriesElement, TruncationOrder};
use crate::{random_nonzero_rational, Error, Rational, Result};

/// A multilinear map `V^{⊗n} → V`, stored densely by coefficients `f_{ν;μ_1..μ_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearMap {
    dim: usize,
    arity: usize,
    data: Vec<Rational>,
}

impl MultilinearMap {
    pub fn zero(dim: usize, arity: usize) -> Self {
        MultilinearMap { dim, arity, data: vec![Rational::zero(); dim.pow(arity as u32 + 1)] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim, 1);
        for nu in 0..dim {
            m.set(nu, &[nu], Rational::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn index(&self, nu: usize, mu: &[usize]) -> usize {
        assert_eq!(mu.len(), self.arity, "index tuple has the wrong length");
        mu.iter().fold(nu, |acc, &m| {
            assert!(m < self.dim, "coordinate out of range");
            acc * self.dim + m
        })
    }

    fn unindex(&self, mut idx: usize) -> (usize, Vec<usize>) {
        let mut mu = vec![0; self.arity];
        for slot in mu.iter_mut().rev() {
            *slot = idx % self.dim;
            idx /= self.dim;
        }
        (idx, mu)
    }

    pub fn get(&self, nu: usize, mu: &[usize]) -> &Rational {
        &self.data[self.index(nu, mu)]
    }

    pub fn set(&mut self, nu: usize, mu: &[usize], value: Rational) {
        let i = self.index(nu, mu);
        self.data[i] = value;
    }

    /// Nonzero coefficients in lexicographic order of `(ν, μ)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, Vec<usize>, &Rational)> {
        self.data.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let (nu, mu) = self.unindex(i);
            (nu, mu, c)
        })
    }

    /// Whether the coefficients are symmetric in `μ`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.data.len()).all(|i| {
            let (nu, mut mu) = self.unindex(i);
            mu.sort_unstable();
            self.data[i] == *self.get(nu, &mu)
        })
    }
}

/// `End_V` for `V = F^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndOperad {
    dim: usize,
}

impl EndOperad {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("End_V needs dim V >= 1".into()));
        }
        Ok(EndOperad { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, a: &MultilinearMap) -> Result<()> {
        if a.dim != self.dim {
            return Err(Error::DimensionMismatch(a.dim, self.dim));
        }
        Ok(())
    }
}

impl Operad for EndOperad {
    type Elem = MultilinearMap;

    fn unit(&self) -> MultilinearMap {
        MultilinearMap::identity(self.dim)
    }

    fn zero(&self, arity: usize) -> MultilinearMap {
        MultilinearMap::zero(self.dim, arity)
    }

    fn arity(&self, a: &MultilinearMap) -> usize {
        a.arity
    }

    fn add(&self, a: &MultilinearMap, b: &MultilinearMap) -> Result<MultilinearMap> {
        self.check(a)?;
        self.check(b)?;
        if a.arity != b.arity {
            return Err(Error::ArityMismatch { expected: a.arity, found: b.arity });
        }
        let data = a.data.iter().zip(&b.data).map(|(x, y)| x + y).collect();
        Ok(MultilinearMap { dim: a.dim, arity: a.arity, data })
    }

    fn scale(&self, a: &MultilinearMap, c: &Rational) -> MultilinearMap {
        MultilinearMap { dim: a.dim, arity: a.arity, data: a.data.iter().map(|x| x * c).collect() }
    }

    fn is_zero(&self, a: &MultilinearMap) -> bool {
        a.data.iter().all(Zero::is_zero)
    }

    /// `act(f, σ)(x_1, …, x_n) = f(x_{σ(1)}, …, x_{σ(n)})`.
    fn act(&self, a: &MultilinearMap, sigma: &Permutation) -> Result<MultilinearMap> {
        self.check(a)?;
        if sigma.len() != a.arity {
            return Err(Error::ArityMismatch { expected: a.arity, found: sigma.len() });
        }
        let mut out = MultilinearMap::zero(a.dim, a.arity);
        for (i, slot) in out.data.iter_mut().enumerate() {
            let (nu, mu) = a.unindex(i);
            let permuted: Vec<usize> = sigma.images().iter().map(|&s| mu[s - 1]).collect();
            *slot = a.get(nu, &permuted).clone();
        }
        Ok(out)
    }

    fn pcomp(&self, a: &MultilinearMap, i: usize, b: &MultilinearMap) -> Result<MultilinearMap> {
        self.check(a)?;
        self.check(b)?;
        if i == 0 || i > a.arity {
            return Err(Error::SlotOutOfRange { slot: i, arity: a.arity });
        }
        let mut out = MultilinearMap::zero(a.dim, a.arity + b.arity - 1);
        let inner: Vec<(usize, Vec<usize>, &Rational)> = b.nonzero().collect();
        for (nu, mu, x) in a.nonzero() {
            for (rho, beta, y) in &inner {
                if *rho != mu[i - 1] {
                    continue;
                }
                let mut idx = mu[..i - 1].to_vec();
                idx.extend(beta);
                idx.extend(&mu[i..]);
                let k = out.index(nu, &idx);
                out.data[k] += x * *y;
            }
        }
        Ok(out)
    }

    fn sample(&self, arity: usize, rng: &mut dyn RngCore) -> MultilinearMap {
        let mut out = MultilinearMap::zero(self.dim, arity);
        for c in out.data.iter_mut() {
            if rng.gen_bool(0.5) {
                *c = random_nonzero_rational(rng);
            }
        }
        out
    }

    /// Lines `nu; mu1,...,mun : p/q` with 1-based coordinates.
    fn render(&self, a: &MultilinearMap) -> String {
        let mut out = String::new();
        for (nu, mu, c) in a.nonzero() {
            let mus: Vec<String> = mu.iter().map(|m| (m + 1).to_string()).collect();
            let _ = writeln!(out, "{}; {} : {}", nu + 1, mus.join(","), c);
        }
        out
    }
}

/// The group element `(id, f_2, …, f_m)` of a pointed series.
pub fn series_to_group(s: &SeriesElement) -> Result<GroupElement<MultilinearMap>> {
    if !s.is_pointed() {
        return Err(Error::NotPointed);
    }
    let components = (2..=s.order())
        .map(|n| {
            let mut m = MultilinearMap::zero(s.dim(), n);
            for nu in 0..s.dim() {
                for mu in tuples(s.dim(), n) {
                    m.set(nu, &mu, s.coeff(nu, &mu));
                }
            }
            m
        })
        .collect();
    Ok(GroupElement { order: s.order(), components })
}

/// The series of an `S_n`-invariant group element over `End_V`.
pub fn group_to_series(g: &GroupElement<MultilinearMap>, dim: usize) -> Result<SeriesElement> {
    let mut s = SeriesElement::identity(dim, TruncationOrder::new(g.order)?)?;
    for (k, comp) in g.components.iter().enumerate() {
        let n = k + 2;
        if comp.dim != dim {
            return Err(Error::DimensionMismatch(comp.dim, dim));
        }
        if !comp.is_symmetric() {
            return Err(Error::NotInvariant(n));
        }
        for nu in 0..dim {
            for mu in multisets(dim, n) {
                s.set_coeff(nu, &mu, comp.get(nu, &mu).clone())?;
            }
        }
    }
    Ok(s)
}
