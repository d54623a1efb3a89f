//! The full decision procedure for arbitrary nonzero A, B: reduce to the
//! coprime core, decide goodness, and return the admissible exponents as a
//! truncated arithmetic progression plus any sporadic members below the
//! threshold. Also the special-case classifier for contexts where the
//! threshold has a closed form.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coprime_core::{
    is_good_coprime_direct, is_good_coprime_structural, order_certificate, CoprimeVerdict,
    VerdictReason,
};
use crate::error::{Error, Result};
use crate::integer_arith::{factorize, residue, valuation_unchecked};
use crate::split::{build_context, SplitContext};

/// The admissible-exponent set: a truncated arithmetic progression
/// {K in N : K = residue (mod modulus), K >= threshold}, possibly preceded
/// by finitely many sporadic members below the threshold. The threshold is
/// the raw gamma(L), possibly 0; membership additionally requires K >= 1.
///
/// Sporadics arise when a prime of g divides a^K + b^K: the extra valuation
/// lets L divide A^K + B^K a few steps before K * nu_p(g) alone reaches
/// nu_p(L). They always lie in the same residue class, so the set stays
/// exactly representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentProgression {
    /// Residue r, already reduced into [0, modulus).
    pub residue: BigUint,
    /// Progression modulus L0 (1 when every large enough K works).
    pub modulus: BigUint,
    /// gamma(L); the progression proper starts here.
    pub threshold: u64,
    /// Admissible exponents below the threshold, increasing.
    pub sporadics: Vec<BigUint>,
    /// Least element of the whole set.
    pub k_min: BigUint,
}

impl ExponentProgression {
    /// Builds a pure truncated progression (no sporadic members). `residue`
    /// is reduced mod `modulus` first, so any class representative works.
    pub fn new(residue: BigUint, modulus: BigUint, threshold: u64) -> Self {
        Self::with_sporadics(residue, modulus, threshold, Vec::new())
    }

    /// Builds the progression together with its sporadic members, which must
    /// be increasing, positive, below the threshold, and in the class.
    pub fn with_sporadics(
        residue: BigUint,
        modulus: BigUint,
        threshold: u64,
        sporadics: Vec<BigUint>,
    ) -> Self {
        assert!(!modulus.is_zero(), "progression modulus must be positive");
        let residue = residue % &modulus;
        let tail_min = least_in_class(&residue, &modulus, threshold);
        debug_assert!(sporadics.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sporadics
            .iter()
            .all(|k| !k.is_zero() && *k < tail_min && k % &modulus == residue));
        let k_min = sporadics.first().cloned().unwrap_or_else(|| tail_min.clone());
        ExponentProgression {
            residue,
            modulus,
            threshold,
            sporadics,
            k_min,
        }
    }

    /// Least element of the progression proper (ignoring sporadics):
    /// gamma + ((r - gamma) mod L0), floored at 1.
    pub fn tail_min(&self) -> BigUint {
        least_in_class(&self.residue, &self.modulus, self.threshold)
    }

    /// Membership test for a candidate exponent.
    pub fn contains(&self, k: &BigUint) -> bool {
        if *k >= BigUint::from(self.threshold.max(1)) && k % &self.modulus == self.residue {
            return true;
        }
        self.sporadics.binary_search(k).is_ok()
    }

    /// The elements in increasing order, starting at `k_min`.
    pub fn elements(&self) -> impl Iterator<Item = BigUint> + '_ {
        let tail = std::iter::successors(Some(self.tail_min()), move |k| Some(k + &self.modulus));
        self.sporadics.iter().cloned().chain(tail)
    }
}

/// Least K >= max(1, floor) with K = residue (mod modulus).
fn least_in_class(residue: &BigUint, modulus: &BigUint, floor: u64) -> BigUint {
    let floor = BigUint::from(floor.max(1));
    let shift = (BigInt::from(residue.clone()) - BigInt::from(floor.clone()))
        .mod_floor(&BigInt::from(modulus.clone()))
        .to_biguint()
        .expect("mod_floor of a positive modulus is nonnegative");
    floor + shift
}

impl fmt::Display for ExponentProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let floor = self.threshold.max(1);
        if self.modulus.is_one() {
            write!(f, "K ≥ {floor}")?;
        } else {
            write!(
                f,
                "K ≡ {} (mod {}), K ≥ {}",
                self.residue, self.modulus, floor
            )?;
        }
        if !self.sporadics.is_empty() {
            write!(f, ", also K ∈ {{")?;
            for (i, k) in self.sporadics.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{k}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Where the decision procedure rejected the modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureStep {
    /// A prime of the coprime core divides a.
    Step3GcdA { prime: BigUint },
    /// A prime of the coprime core divides b.
    Step3GcdB { prime: BigUint },
    /// The coprime core is not good for (a, b).
    Step4CoreBad,
}

impl FailureStep {
    /// Stable snake_case tag, payloads elided.
    pub fn label(&self) -> &'static str {
        match self {
            FailureStep::Step3GcdA { .. } => "step3_gcd_a",
            FailureStep::Step3GcdB { .. } => "step3_gcd_b",
            FailureStep::Step4CoreBad => "step4_core_bad",
        }
    }
}

impl fmt::Display for FailureStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureStep::Step3GcdA { prime } => write!(f, "step3_gcd_a (prime {prime})"),
            FailureStep::Step3GcdB { prime } => write!(f, "step3_gcd_b (prime {prime})"),
            FailureStep::Step4CoreBad => write!(f, "step4_core_bad"),
        }
    }
}

/// Full outcome of `decide`: the verdict, the split that produced it, the
/// progression when good, and the failing step when bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessVerdict {
    pub good: bool,
    pub context: SplitContext,
    pub progression: Option<ExponentProgression>,
    pub coprime_verdict: Option<CoprimeVerdict>,
    pub failure_step: Option<FailureStep>,
}

/// Shapes of the split for which the threshold has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    /// ell = 1: L divides a power of g, only the threshold matters.
    PureGPart,
    /// Every prime of g appears in L at most as often as in g (and at least
    /// one appears): gamma = 1.
    GContained,
    /// g = p^s: gamma = ceil(nu_p(L) / s).
    PrimePowerG,
    /// g squarefree: gamma = max nu_p(L) over p | g.
    SquarefreeG,
    /// No corollary applies.
    General,
}

impl SpecialCase {
    /// Stable snake_case tag.
    pub fn label(&self) -> &'static str {
        match self {
            SpecialCase::PureGPart => "pure_g_part",
            SpecialCase::GContained => "g_contained",
            SpecialCase::PrimePowerG => "prime_power_g",
            SpecialCase::SquarefreeG => "squarefree_g",
            SpecialCase::General => "general",
        }
    }
}

/// Which coprime criterion drives the decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoprimeCriterion {
    Direct,
    Structural,
}

/// Decides whether L divides A^K + B^K for some positive K, using the
/// direct coprime criterion (the structural one is cross-checked in debug
/// builds).
pub fn decide(a: &BigInt, b: &BigInt, l: &BigUint) -> Result<GoodnessVerdict> {
    decide_using(a, b, l, CoprimeCriterion::Direct)
}

/// `decide` with an explicit choice of coprime criterion.
pub fn decide_using(
    a: &BigInt,
    b: &BigInt,
    l: &BigUint,
    criterion: CoprimeCriterion,
) -> Result<GoodnessVerdict> {
    let ctx = build_context(a, b, l)?;
    Ok(decide_context(ctx, criterion))
}

fn decide_context(ctx: SplitContext, criterion: CoprimeCriterion) -> GoodnessVerdict {
    // Steps 0 and 2: L = 1 falls under ell = 1 with gamma = 0
    if ctx.ell.is_one() {
        let sporadics = sporadics_below(&ctx, ctx.gamma);
        let progression = ExponentProgression::with_sporadics(
            BigUint::zero(),
            BigUint::one(),
            ctx.gamma,
            sporadics,
        );
        return GoodnessVerdict {
            good: true,
            context: ctx,
            progression: Some(progression),
            coprime_verdict: None,
            failure_step: None,
        };
    }

    // Steps 3 and 4: the coprime machinery screens gcds and tests the core
    let run = |c: CoprimeCriterion| match c {
        CoprimeCriterion::Direct => is_good_coprime_direct(&ctx.a, &ctx.b, &ctx.ell),
        CoprimeCriterion::Structural => is_good_coprime_structural(&ctx.a, &ctx.b, &ctx.ell),
    };
    let verdict = run(criterion).expect("a, b coprime by construction");
    #[cfg(debug_assertions)]
    {
        let other = match criterion {
            CoprimeCriterion::Direct => CoprimeCriterion::Structural,
            CoprimeCriterion::Structural => CoprimeCriterion::Direct,
        };
        let cross = run(other).expect("a, b coprime by construction");
        assert_eq!(
            verdict.good, cross.good,
            "coprime criteria disagree on {}",
            ctx
        );
    }

    if !verdict.good {
        let failure = match &verdict.reason {
            VerdictReason::SharesFactorWithA { prime } => FailureStep::Step3GcdA {
                prime: prime.clone(),
            },
            VerdictReason::SharesFactorWithB { prime } => FailureStep::Step3GcdB {
                prime: prime.clone(),
            },
            _ => FailureStep::Step4CoreBad,
        };
        return GoodnessVerdict {
            good: false,
            context: ctx,
            progression: None,
            coprime_verdict: Some(verdict),
            failure_step: Some(failure),
        };
    }

    // Step 5: attach the truncated progression
    let (residue, modulus) = match &verdict.certificate {
        Some(cert) => (&cert.order >> 1u32, cert.order.clone()),
        None if ctx.ell <= BigUint::from(2u32) => (BigUint::zero(), BigUint::one()),
        None => {
            // structural path proves goodness without an order; compute one
            let cert = order_certificate(&ctx.a, &ctx.b, &ctx.ell);
            (&cert.order >> 1u32, cert.order)
        }
    };
    let sporadics = sporadics_below(&ctx, ctx.gamma);
    let progression =
        ExponentProgression::with_sporadics(residue, modulus, ctx.gamma, sporadics);
    GoodnessVerdict {
        good: true,
        context: ctx,
        progression: Some(progression),
        coprime_verdict: Some(verdict),
        failure_step: None,
    }
}

/// Exponents K in [1, threshold) with L | A^K + B^K, found by direct
/// evaluation. For K >= gamma(L) the g-part of L is absorbed by g^K alone,
/// so only this finite range can hold extra exponents; they exist exactly
/// when some prime of g also divides a^K + b^K and its valuation covers
/// what K * nu_p(g) still misses.
fn sporadics_below(ctx: &SplitContext, threshold: u64) -> Vec<BigUint> {
    if threshold <= 1 {
        return Vec::new();
    }
    let l = &ctx.modulus;
    let ra = residue(&ctx.base_a, l);
    let rb = residue(&ctx.base_b, l);
    let mut xa = ra.clone();
    let mut xb = rb.clone();
    let mut out = Vec::new();
    for k in 1..threshold {
        if ((&xa + &xb) % l).is_zero() {
            out.push(BigUint::from(k));
        }
        xa = xa * &ra % l;
        xb = xb * &rb % l;
    }
    out
}

/// Admissible exponents of a good modulus; errs with `NotGood` otherwise.
pub fn exponent_set(a: &BigInt, b: &BigInt, l: &BigUint) -> Result<ExponentProgression> {
    let verdict = decide(a, b, l)?;
    verdict.progression.ok_or(Error::NotGood)
}

/// Least K with L | A^K + B^K; errs with `NotGood` when none exists.
pub fn min_exponent(a: &BigInt, b: &BigInt, l: &BigUint) -> Result<BigUint> {
    exponent_set(a, b, l).map(|p| p.k_min)
}

/// Matches the context against the closed-form corollaries, with precedence
/// pure_g_part > g_contained > prime_power_g > squarefree_g > general.
pub fn classify_special_case(ctx: &SplitContext) -> SpecialCase {
    let case = classify(ctx);
    debug_assert!(
        corollary_gamma(ctx, case).map_or(true, |cg| cg == ctx.gamma),
        "closed-form gamma disagrees with the general one for {ctx}"
    );
    case
}

fn classify(ctx: &SplitContext) -> SpecialCase {
    if ctx.ell.is_one() {
        return SpecialCase::PureGPart;
    }
    if ctx.g.is_one() {
        return SpecialCase::General;
    }
    let g_factors = factorize(&ctx.g).expect("g >= 1");
    // the gamma = 1 corollary needs some prime of g to actually occur in L
    let contained = !ctx.g_part.is_one()
        && g_factors
            .factors()
            .iter()
            .all(|(p, e)| valuation_unchecked(p, &ctx.modulus) <= *e);
    if contained {
        return SpecialCase::GContained;
    }
    if g_factors.len() == 1 {
        return SpecialCase::PrimePowerG;
    }
    if g_factors.factors().iter().all(|(_, e)| *e == 1) {
        return SpecialCase::SquarefreeG;
    }
    SpecialCase::General
}

/// The corollary's closed-form gamma for the classified case, when one
/// exists. Must equal `ctx.gamma` whenever present.
pub fn corollary_gamma(ctx: &SplitContext, case: SpecialCase) -> Option<u64> {
    match case {
        SpecialCase::GContained => Some(1),
        SpecialCase::PrimePowerG => {
            let f = factorize(&ctx.g).expect("g >= 1");
            let (p, s) = &f.factors()[0];
            let alpha = valuation_unchecked(p, &ctx.modulus) as u64;
            Some((alpha + *s as u64 - 1) / *s as u64)
        }
        SpecialCase::SquarefreeG => factorize(&ctx.g)
            .expect("g >= 1")
            .primes()
            .map(|p| valuation_unchecked(p, &ctx.modulus) as u64)
            .max(),
        SpecialCase::PureGPart | SpecialCase::General => None,
    }
}

/// All good L in 1..=n, ascending, each with its progression.
pub fn enumerate_good(
    a: &BigInt,
    b: &BigInt,
    n: u64,
) -> Result<Vec<(u64, ExponentProgression)>> {
    let mut out = Vec::new();
    for l in 1..=n {
        let verdict = decide(a, b, &BigUint::from(l))?;
        if verdict.good {
            out.push((l, verdict.progression.expect("good verdicts carry a set")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::build_context;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ctx(a: i64, b: i64, l: u64) -> SplitContext {
        build_context(&int(a), &int(b), &nat(l)).unwrap()
    }

    #[test]
    fn progression_minimum() {
        let p = ExponentProgression::new(nat(5), nat(10), 7);
        assert_eq!(p.k_min, nat(15));
        let p = ExponentProgression::new(nat(5), nat(10), 4);
        assert_eq!(p.k_min, nat(5));
        let p = ExponentProgression::new(nat(0), nat(1), 0);
        assert_eq!(p.k_min, nat(1));
        let p = ExponentProgression::new(nat(0), nat(1), 3);
        assert_eq!(p.k_min, nat(3));
        let p = ExponentProgression::new(nat(2), nat(4), 1);
        assert_eq!(p.k_min, nat(2));
        // representative above the modulus is reduced first
        let p = ExponentProgression::new(nat(15), nat(10), 0);
        assert_eq!(p.residue, nat(5));
        assert_eq!(p.k_min, nat(5));
    }

    #[test]
    fn progression_membership_and_elements() {
        let p = ExponentProgression::new(nat(5), nat(10), 7);
        let first: Vec<BigUint> = p.elements().take(4).collect();
        assert_eq!(first, vec![nat(15), nat(25), nat(35), nat(45)]);
        assert!(p.contains(&nat(15)));
        assert!(!p.contains(&nat(5)), "below the threshold");
        assert!(!p.contains(&nat(16)));
        for k in p.elements().take(50) {
            assert!(p.contains(&k));
        }
    }

    #[test]
    fn progression_display() {
        assert_eq!(
            ExponentProgression::new(nat(5), nat(10), 7).to_string(),
            "K ≡ 5 (mod 10), K ≥ 7"
        );
        assert_eq!(
            ExponentProgression::new(nat(0), nat(1), 3).to_string(),
            "K ≥ 3"
        );
        assert_eq!(
            ExponentProgression::new(nat(0), nat(1), 0).to_string(),
            "K ≥ 1"
        );
    }

    #[test]
    fn decide_golden() {
        let v = decide(&int(18), &int(12), &nat(72)).unwrap();
        assert!(v.good);
        let p = v.progression.unwrap();
        assert_eq!((p.residue, p.modulus, p.threshold, p.k_min), (nat(0), nat(1), 3, nat(3)));

        let v = decide(&int(10), &int(15), &nat(6)).unwrap();
        assert!(!v.good);
        assert_eq!(
            v.failure_step,
            Some(FailureStep::Step3GcdA { prime: nat(2) })
        );
        assert!(v.progression.is_none());

        let v = decide(&int(6), &int(3), &nat(15)).unwrap();
        assert!(v.good);
        let p = v.progression.unwrap();
        assert_eq!((p.residue, p.modulus, p.threshold, p.k_min), (nat(2), nat(4), 1, nat(2)));

        let v = decide(&int(18), &int(12), &nat(3200)).unwrap();
        assert!(v.good);
        assert_eq!(v.context.gamma, 7);
        let p = v.progression.unwrap();
        assert_eq!((p.residue, p.modulus, p.threshold, p.k_min), (nat(5), nat(10), 7, nat(15)));

        let v = decide(&int(18), &int(12), &nat(1200)).unwrap();
        let p = v.progression.unwrap();
        assert_eq!((p.residue, p.modulus, p.threshold, p.k_min), (nat(5), nat(10), 4, nat(5)));

        let v = decide(&int(18), &int(12), &nat(1)).unwrap();
        assert!(v.good);
        let p = v.progression.unwrap();
        assert_eq!((p.residue, p.modulus, p.threshold, p.k_min), (nat(0), nat(1), 0, nat(1)));
    }

    #[test]
    fn sporadic_exponents_below_threshold() {
        // 64 | 6^3 + 10^3 = 1216 because nu_2(3^3 + 5^3) = 3 tops up 3 * nu_2(2)
        let v = decide(&int(6), &int(10), &nat(64)).unwrap();
        let p = v.progression.unwrap();
        assert_eq!(p.threshold, 6);
        assert_eq!(p.sporadics, vec![nat(3), nat(5)]);
        assert_eq!(p.k_min, nat(3));
        assert_eq!(p.tail_min(), nat(6));
        assert!(p.contains(&nat(3)));
        assert!(!p.contains(&nat(4)));
        assert!(p.contains(&nat(5)));
        assert!(p.contains(&nat(6)));
        let first: Vec<BigUint> = p.elements().take(5).collect();
        assert_eq!(first, vec![nat(3), nat(5), nat(6), nat(7), nat(8)]);
        assert_eq!(p.to_string(), "K ≥ 6, also K ∈ {3, 5}");

        let v = decide(&int(-8), &int(-8), &nat(16)).unwrap();
        let p = v.progression.unwrap();
        assert_eq!((p.threshold, p.sporadics.clone(), p.k_min.clone()), (2, vec![nat(1)], nat(1)));

        let v = decide(&int(3), &int(6), &nat(9)).unwrap();
        assert_eq!(v.progression.unwrap().k_min, nat(1));
        assert_eq!(min_exponent(&int(3), &int(6), &nat(9)).unwrap(), nat(1));
    }

    #[test]
    fn decide_structural_matches() {
        for (a, b, l) in [(18i64, 12, 3200u64), (6, 3, 15), (10, 15, 6), (2, 1, 7), (-18, 12, 1200)] {
            let d = decide_using(&int(a), &int(b), &nat(l), CoprimeCriterion::Direct).unwrap();
            let s = decide_using(&int(a), &int(b), &nat(l), CoprimeCriterion::Structural).unwrap();
            assert_eq!(d.good, s.good);
            assert_eq!(d.progression, s.progression);
        }
    }

    #[test]
    fn exponent_set_and_min() {
        let p = exponent_set(&int(18), &int(12), &nat(3200)).unwrap();
        let first: Vec<BigUint> = p.elements().take(4).collect();
        assert_eq!(first, vec![nat(15), nat(25), nat(35), nat(45)]);
        assert_eq!(min_exponent(&int(18), &int(12), &nat(3200)).unwrap(), nat(15));
        assert_eq!(min_exponent(&int(18), &int(12), &nat(72)).unwrap(), nat(3));
        assert_eq!(min_exponent(&int(7), &int(5), &nat(1)).unwrap(), nat(1));
        assert_eq!(
            exponent_set(&int(10), &int(15), &nat(6)),
            Err(Error::NotGood)
        );
    }

    #[test]
    fn classify_golden() {
        assert_eq!(classify_special_case(&ctx(18, 12, 72)), SpecialCase::PureGPart);
        assert_eq!(classify_special_case(&ctx(6, 3, 15)), SpecialCase::GContained);
        assert_eq!(classify_special_case(&ctx(5, 3, 40)), SpecialCase::General);
        // g = 4 and nu_2(96) = 5 > 2 escapes containment
        assert_eq!(classify_special_case(&ctx(12, 8, 96)), SpecialCase::PrimePowerG);
        // g = 6 with nu_2(40) = 3 > 1
        assert_eq!(classify_special_case(&ctx(18, 12, 40)), SpecialCase::SquarefreeG);
        // g = 12 is neither a prime power nor squarefree; nu_2(320) > 2
        assert_eq!(classify_special_case(&ctx(12, 24, 320)), SpecialCase::General);
    }

    #[test]
    fn classify_respects_precedence() {
        // contained beats prime power when both hypotheses hold (g = 3 | 15)
        let c = ctx(6, 3, 15);
        assert_eq!(c.g, nat(3));
        assert_eq!(classify_special_case(&c), SpecialCase::GContained);
        // prime power beats squarefree for single primes out of containment
        let c = ctx(2, 6, 12);
        assert_eq!(c.g, nat(2));
        assert_eq!(classify_special_case(&c), SpecialCase::PrimePowerG);
    }

    #[test]
    fn corollary_gammas_match() {
        for (a, b, l) in [
            (6i64, 3, 15u64),
            (12, 8, 96),
            (18, 12, 40),
            (18, 12, 72),
            (12, 24, 320),
            (5, 3, 40),
            (30, 42, 360),
        ] {
            let c = ctx(a, b, l);
            let case = classify_special_case(&c);
            if let Some(cg) = corollary_gamma(&c, case) {
                assert_eq!(cg, c.gamma, "A={a} B={b} L={l}");
            }
        }
    }

    #[test]
    fn enumerate_golden() {
        let good: Vec<u64> = enumerate_good(&int(2), &int(1), 12)
            .unwrap()
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        assert_eq!(good, vec![1, 3, 5, 9, 11]);

        let good = enumerate_good(&int(7), &int(9), 1).unwrap();
        assert_eq!(good.len(), 1);
        assert_eq!(good[0].0, 1);

        let good: Vec<u64> = enumerate_good(&int(18), &int(12), 80)
            .unwrap()
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        assert!(good.contains(&7), "7 divides 18^3 + 12^3 = 7560");
        assert!(good.contains(&72));
    }

    #[test]
    fn symmetry_smoke() {
        for a in [-9i64, 4, 6, 18] {
            for b in [3i64, 12, -5] {
                for l in 1u64..=60 {
                    let v = decide(&int(a), &int(b), &nat(l)).unwrap();
                    let w = decide(&int(b), &int(a), &nat(l)).unwrap();
                    assert_eq!(v.good, w.good, "A={a} B={b} L={l}");
                    assert_eq!(v.progression, w.progression, "A={a} B={b} L={l}");
                }
            }
        }
    }
}
