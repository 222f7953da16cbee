//! Hurwitz numbers `H^g_alpha` and labeled Hurwitz class degrees.
//!
//! `H^g_alpha` is `(1/d!)` times the number of monodromy tuples
//! `(sigma_inf, tau_1, .., tau_r)` with `sigma_inf` of cycle type `alpha`,
//! every `tau_i` a transposition, `tau_r ∘ … ∘ tau_1 ∘ sigma_inf = id`, and
//! the generated group transitive. Covers with automorphisms therefore count
//! fractionally. The labeled class degree is `#Aut(alpha) · H`.
//!
//! Two independent routes compute it: [`hurwitz_brute`] walks every tuple,
//! [`hurwitz_fast`] runs a class-algebra recursion and strips disconnected
//! contributions by inclusion-exclusion.

mod brute;
mod fast;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::scalar::{self, Scalar};
use crate::symmetric::{aut_count, HurwitzProblem, Permutation};

pub use brute::{
    enumerate_tuples, for_each_tuple, hurwitz_brute, hurwitz_brute_with, search_size, TupleView,
    DEFAULT_BUDGET, MAX_ORACLE_DEGREE,
};
pub(crate) use brute::{fold_tuples, for_each_representative_tuple};
pub use fast::{
    connected_factorizations, disconnected_factorizations, hurwitz_fast, FactorizationCounter,
};

/// One branched cover in monodromy form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonodromyTuple {
    pub sigma_inf: Permutation,
    pub taus: Vec<Permutation>,
}

impl MonodromyTuple {
    pub fn d(&self) -> usize {
        self.sigma_inf.degree()
    }

    /// `rho_0 = sigma_inf`, `rho_i = tau_i ∘ rho_{i-1}`; the last is the identity
    /// for a valid tuple.
    pub fn partial_products(&self) -> Vec<Permutation> {
        let mut out = vec![self.sigma_inf.clone()];
        for t in &self.taus {
            let next = crate::symmetric::compose(t, out.last().unwrap()).expect("same degree");
            out.push(next);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        let d = self.d();
        let rhos = self.partial_products();
        let mut gens = self.taus.clone();
        gens.push(self.sigma_inf.clone());
        self.taus
            .iter()
            .all(|t| t.degree() == d && t.as_transposition().is_some())
            && rhos.last().unwrap().is_identity()
            && crate::symmetric::is_transitive(&gens, d).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue {
    pub problem: HurwitzProblem,
    pub tuple_count: BigUint,
    /// `H^g_alpha = tuple_count / d!`
    pub h: Scalar,
    /// `#Aut(alpha) · H^g_alpha`
    pub h_labeled: Scalar,
}

impl HurwitzValue {
    pub(crate) fn from_tuple_count(problem: &HurwitzProblem, tuple_count: BigUint) -> Self {
        let h = scalar::from_biguint(&tuple_count)
            / scalar::from_biguint(&scalar::factorial(problem.d() as u64));
        let h_labeled = &h * scalar::from_biguint(&aut_count(&problem.partition()));
        HurwitzValue {
            problem: problem.clone(),
            tuple_count,
            h,
            h_labeled,
        }
    }
}

impl Serialize for HurwitzValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            g: u32,
            alpha: &'a [u32],
            d: usize,
            n: usize,
            r: usize,
            tuple_count: serde_json::Value,
            h: String,
            h_labeled: String,
        }
        Record {
            g: self.problem.genus,
            alpha: &self.problem.alpha,
            d: self.problem.d(),
            n: self.problem.n(),
            r: self.problem.r(),
            tuple_count: big_json(&self.tuple_count),
            h: scalar::format(&self.h),
            h_labeled: scalar::format(&self.h_labeled),
        }
        .serialize(s)
    }
}

/// JSON number when it fits in a u64, decimal string otherwise.
pub(crate) fn big_json(n: &BigUint) -> serde_json::Value {
    match u64::try_from(n) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(n.to_string()),
    }
}
