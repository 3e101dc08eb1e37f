//! Measures on the group set algebras, integrals of simple and step
//! functions, and the invariance / regularity / positivity checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, PositiveCompact};
use crate::haar::{haar_measure_estimate, Schedule};
use crate::numeric::{ExtNonneg, Rat, VecQ};
use crate::report::{CheckReport, Quantity, Record};
use crate::setalg::Subset;
use crate::simple::{SimpleFunc, StepFuncVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureKind {
    /// `scale · length`.
    Lebesgue {
        #[serde(default = "Rat::one")]
        scale: Rat,
    },
    /// `scale · cardinality`.
    Counting {
        #[serde(default = "Rat::one")]
        scale: Rat,
    },
    Dirac {
        at: Element,
    },
    /// Haar estimate normalised at `K0`, at resolution `n`.
    Haar {
        #[serde(rename = "K0")]
        k0: Subset,
        n: u32,
        #[serde(default)]
        schedule: Schedule,
    },
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// A measure description. `sigma_finite: false` marks an evaluator as not
/// σ-finite regardless of its kind, for negative tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(flatten)]
    pub kind: MeasureKind,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub sigma_finite: bool,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> MeasureSpec {
        MeasureSpec { kind, sigma_finite: true }
    }

    pub fn lebesgue(scale: Rat) -> MeasureSpec {
        MeasureSpec::new(MeasureKind::Lebesgue { scale })
    }

    pub fn counting() -> MeasureSpec {
        MeasureSpec::new(MeasureKind::Counting { scale: Rat::one() })
    }

    pub fn dirac(at: Element) -> MeasureSpec {
        MeasureSpec::new(MeasureKind::Dirac { at })
    }

    pub fn haar(k0: Subset, n: u32, schedule: Schedule) -> MeasureSpec {
        MeasureSpec::new(MeasureKind::Haar { k0, n, schedule })
    }

    pub fn not_sigma_finite(mut self) -> MeasureSpec {
        self.sigma_finite = false;
        self
    }
}

/// A measure bound to its group. `inverted` selects `μ̌(A) = μ(A⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    group: GroupSpec,
    spec: MeasureSpec,
    inverted: bool,
}

fn ext(b: bool) -> ExtNonneg {
    if b {
        ExtNonneg::one()
    } else {
        ExtNonneg::zero()
    }
}

/// `|a − b|` when finite.
pub(crate) fn residual(a: &ExtNonneg, b: &ExtNonneg) -> Option<Rat> {
    a.abs_diff(b).as_finite().cloned()
}

impl Measure {
    pub fn new(group: GroupSpec, spec: MeasureSpec) -> Result<Measure> {
        match &spec.kind {
            MeasureKind::Lebesgue { scale } => {
                if scale.is_negative() {
                    return Err(Error::Domain(format!("negative scale {scale}")));
                }
                if group.is_discrete() {
                    return Err(Error::Domain(format!("Lebesgue measure is not defined on {group}")));
                }
            }
            MeasureKind::Counting { scale } => {
                if scale.is_negative() {
                    return Err(Error::Domain(format!("negative scale {scale}")));
                }
            }
            MeasureKind::Dirac { at } => {
                group.element(at)?;
            }
            MeasureKind::Haar { k0, n, .. } => {
                PositiveCompact::new(&group, k0)?;
                if *n == 0 {
                    return Err(Error::Domain("Haar resolution must be at least 1".into()));
                }
            }
        }
        Ok(Measure { group, spec, inverted: false })
    }

    pub fn lebesgue(scale: Rat) -> Measure {
        Measure::new(GroupSpec::RealAdd, MeasureSpec::lebesgue(scale)).expect("valid")
    }

    pub fn counting(group: &GroupSpec) -> Measure {
        Measure::new(group.clone(), MeasureSpec::counting()).expect("valid")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// `μ̌`; applying it twice gives `μ` back.
    pub fn inverted(&self) -> Measure {
        Measure { inverted: !self.inverted, ..self.clone() }
    }

    pub fn is_zero_measure(&self) -> bool {
        matches!(&self.spec.kind, MeasureKind::Lebesgue { scale } | MeasureKind::Counting { scale } if scale.is_zero())
    }

    /// Counting measure on a continuum is not σ-finite; otherwise the flag
    /// decides.
    pub fn is_sigma_finite(&self) -> bool {
        let continuum_count = matches!(&self.spec.kind, MeasureKind::Counting { scale } if !scale.is_zero())
            && !self.group.is_discrete();
        self.spec.sigma_finite && !continuum_count
    }

    /// Exact evaluator, as opposed to a Haar estimate on a continuous group.
    pub fn is_exact(&self) -> bool {
        !matches!(self.spec.kind, MeasureKind::Haar { .. }) || self.group.is_discrete()
    }

    /// Left-invariant by construction on every set (Lebesgue, counting and
    /// their multiples on the additive groups and finite groups).
    pub fn is_invariant_family(&self) -> bool {
        match &self.spec.kind {
            MeasureKind::Lebesgue { .. } => self.group == GroupSpec::RealAdd,
            MeasureKind::Counting { .. } => self.group.is_discrete(),
            _ => false,
        }
    }

    fn prepare(&self, a: &Subset) -> Result<Subset> {
        let a = self.group.normalize(a)?;
        if self.inverted {
            self.group.invert_set(&a)
        } else {
            Ok(a)
        }
    }

    fn eval_prepared(&self, a: &Subset) -> Result<(ExtNonneg, ExtNonneg)> {
        let exact = |v: ExtNonneg| Ok((v.clone(), v));
        match (&self.spec.kind, a) {
            (MeasureKind::Lebesgue { scale }, Subset::Intervals(iv)) => {
                exact(ExtNonneg::Finite(scale.clone()) * iv.length())
            }
            (MeasureKind::Counting { scale }, s) => {
                let card = match s {
                    Subset::Points(p) => ExtNonneg::int(p.len() as u64),
                    Subset::Intervals(iv) if self.group.is_discrete() => iv.lattice_count(),
                    Subset::Intervals(iv) => {
                        if iv.intervals().iter().any(|(lo, hi)| lo < hi) {
                            ExtNonneg::Infinity
                        } else {
                            ExtNonneg::int(iv.component_count() as u64)
                        }
                    }
                };
                exact(ExtNonneg::Finite(scale.clone()) * card)
            }
            (MeasureKind::Dirac { at }, s) => exact(ext(self.group.contains(s, at)?)),
            (MeasureKind::Haar { k0, n, schedule }, s) => {
                let est = haar_measure_estimate(&self.group, k0, s, *n, schedule)?;
                Ok((est.lo, est.hi))
            }
            (kind, s) => Err(Error::Domain(format!("{kind:?} cannot evaluate {s}"))),
        }
    }

    /// `μ(A)`; for a Haar estimate the midpoint of its bracket.
    pub fn eval(&self, a: &Subset) -> Result<ExtNonneg> {
        if let Some(v) = self.inverted_atom(a)? {
            return Ok(v);
        }
        let a = self.prepare(a)?;
        if let MeasureKind::Haar { k0, n, schedule } = &self.spec.kind {
            return Ok(haar_measure_estimate(&self.group, k0, &a, *n, schedule)?.point);
        }
        Ok(self.eval_prepared(&a)?.0)
    }

    /// Lower and upper values; equal for exact evaluators.
    pub fn eval_bracket(&self, a: &Subset) -> Result<(ExtNonneg, ExtNonneg)> {
        if let Some(v) = self.inverted_atom(a)? {
            return Ok((v.clone(), v));
        }
        self.eval_prepared(&self.prepare(a)?)
    }

    /// `δ̌_g(A) = [g⁻¹ ∈ A]`, read off `A` itself: reflecting a half-open
    /// set moves its endpoints, which an atom can sit on.
    fn inverted_atom(&self, a: &Subset) -> Result<Option<ExtNonneg>> {
        match &self.spec.kind {
            MeasureKind::Dirac { at } if self.inverted => {
                let a = self.group.normalize(a)?;
                Ok(Some(ext(self.group.contains(&a, &self.group.inverse(at)?)?)))
            }
            _ => Ok(None),
        }
    }

    /// `μ̌(A) = μ(A⁻¹)`.
    pub fn inv_eval(&self, a: &Subset) -> Result<ExtNonneg> {
        self.inverted().eval(a)
    }

    /// `∫⁻ f dμ = Σ μ(piece)·value`, with `0·∞ = 0`.
    pub fn lintegral(&self, f: &SimpleFunc) -> Result<ExtNonneg> {
        let mut total = ExtNonneg::zero();
        for (s, v) in f.pieces() {
            total = total + self.eval(s)? * v.clone();
        }
        Ok(total)
    }

    /// Bochner integral of a step function; pieces of infinite measure are
    /// left out of the sum.
    pub fn bintegral(&self, f: &StepFuncVec) -> Result<VecQ> {
        let mut total = VecQ::zeros(f.dim());
        for (s, v) in f.pieces() {
            if let ExtNonneg::Finite(m) = self.eval(s)? {
                total = total.checked_add(&v.scale(&m))?;
            }
        }
        Ok(total)
    }

    /// `∫⁻ ‖f‖ dμ < ∞`.
    pub fn integrable(&self, f: &StepFuncVec) -> Result<bool> {
        Ok(self.lintegral(&f.norm_fn()?)?.is_finite())
    }

    /// Per case `(g, A)`: `μ(g⁻¹·A) = μ(A)`, the preimage of `A` under left
    /// multiplication by `g`. Estimates pass when their brackets overlap.
    pub fn left_invariance_check(&self, cases: &[(Element, Subset)]) -> Result<CheckReport> {
        let mut rep = CheckReport::new("left_invariance");
        for (g, a) in cases {
            let pre = self.group.preimage_translate(g, &self.group.normalize(a)?)?;
            let (lo1, hi1) = self.eval_bracket(&pre)?;
            let (lo2, hi2) = self.eval_bracket(a)?;
            let ok = if self.is_exact() { lo1 == lo2 } else { lo1 <= hi2 && lo2 <= hi1 };
            let mut r = Record::new(0, "μ(g⁻¹A) = μ(A)").input("g", g).input("A", a);
            if self.is_exact() {
                r = r.value(Quantity::ext("mu_preimage", &lo1)).value(Quantity::ext("mu_A", &lo2));
            } else {
                r = r.value(Quantity::bracket("mu_preimage", &lo1, &hi1)).value(Quantity::bracket("mu_A", &lo2, &hi2));
            }
            if let Some(res) = residual(&lo1, &lo2) {
                r = r.residual(res);
            }
            rep.push(r.pass_if(ok));
        }
        Ok(rep)
    }

    /// Finite on compacts; outer approximation of each measurable set by
    /// open supersets; inner approximation of each open set by compact
    /// subsets. The approximating sequences must be monotone and end within
    /// `tolerance` of the target.
    pub fn regular_check(
        &self,
        compacts: &[Subset],
        measurable: &[Subset],
        opens: &[Subset],
        schedule: &Schedule,
        tolerance: &Rat,
    ) -> Result<CheckReport> {
        let mut rep = CheckReport::new("regularity");
        for k in compacts {
            let k = self.group.normalize(k)?;
            if !self.group.is_compact(&k) {
                return Err(Error::Domain(format!("{k} is not compact")));
            }
            let v = self.eval(&k)?;
            rep.push(Record::new(0, "μ(K) < ∞").input("K", &k).value(Quantity::ext("mu_K", &v)).pass_if(v.is_finite()));
        }
        let eps = schedule.eps();
        for a in measurable {
            let a = self.group.normalize(a)?;
            let target = self.eval(&a)?;
            let seq = eps
                .iter()
                .map(|e| self.eval(&self.group.open_hull(&a, e)?))
                .collect::<Result<Vec<_>>>()?;
            rep.push(self.approx_record("outer regularity", &a, &target, &seq, true, tolerance));
        }
        for u in opens {
            let u = self.group.normalize(u)?;
            if !self.group.is_open(&u) {
                return Err(Error::Domain(format!("{u} is not open")));
            }
            let target = self.eval(&u)?;
            let seq = eps
                .iter()
                .map(|e| self.eval(&self.group.inner_compact(&u, e)?))
                .collect::<Result<Vec<_>>>()?;
            rep.push(self.approx_record("inner regularity", &u, &target, &seq, false, tolerance));
        }
        Ok(rep)
    }

    fn approx_record(
        &self,
        label: &str,
        set: &Subset,
        target: &ExtNonneg,
        seq: &[ExtNonneg],
        from_above: bool,
        tolerance: &Rat,
    ) -> Record {
        let monotone = seq.windows(2).all(|w| if from_above { w[1] <= w[0] } else { w[0] <= w[1] });
        let bounded = seq.iter().all(|v| if from_above { v >= target } else { v <= target });
        let last = seq.last().cloned().unwrap_or_else(|| target.clone());
        let gap = last.abs_diff(target);
        let close = gap.as_finite().is_some_and(|g| g <= tolerance);
        let mut r = Record::new(0, label)
            .input("set", set)
            .value(Quantity::ext("target", target))
            .value(Quantity::ext("final", &last))
            .value(Quantity::flag("monotone", monotone));
        if let Some(g) = gap.as_finite() {
            r = r.residual(g.clone());
        }
        r.pass_if(monotone && bounded && close)
    }

    /// `μ(U) > 0` and `∫⁻ f dμ ≥ c·μ(U) > 0` for `f ≥ c·χ_U`, `U` nonempty
    /// open, `c > 0`.
    pub fn positivity_check(&self, u: &Subset, f: &SimpleFunc, c: &Rat) -> Result<CheckReport> {
        let u = self.group.normalize(u)?;
        if u.is_empty() || !self.group.is_open(&u) {
            return Err(Error::Precondition(format!("{u} is not a nonempty open set")));
        }
        if !c.is_positive() {
            return Err(Error::Precondition(format!("minorant constant {c} is not positive")));
        }
        let cc = ExtNonneg::Finite(c.clone());
        let mut high = self.group.empty_set();
        for (s, v) in f.pieces() {
            if *v >= cc {
                high = high.union(&self.group.normalize(s)?)?;
            }
        }
        if !u.is_subset_of(&high) {
            return Err(Error::Precondition(format!("f is not bounded below by {c} on {u}")));
        }
        let (mu_u, _) = self.eval_bracket(&u)?;
        let integral = self.lintegral(f)?;
        let bound = &cc * &mu_u;
        let mut rep = CheckReport::new("positivity");
        rep.push(
            Record::new(0, "μ(U) > 0")
                .input("U", &u)
                .value(Quantity::ext("mu_U_lower", &mu_u))
                .pass_if(!mu_u.is_zero()),
        );
        rep.push(
            Record::new(0, "∫⁻f ≥ c·μ(U) > 0")
                .input("c", c)
                .value(Quantity::ext("integral", &integral))
                .value(Quantity::ext("c_mu_U", &bound))
                .pass_if(integral >= bound && !bound.is_zero()),
        );
        Ok(rep)
    }

    /// Integrals along a pointwise nondecreasing chain. With a `limit`
    /// (the pointwise supremum of the full sequence), the final gap
    /// `∫ limit − ∫ f_N` is reported and must not exceed `bound`; without
    /// one, the chain's last element is its supremum.
    pub fn monotone_convergence_check(
        &self,
        chain: &[SimpleFunc],
        limit: Option<&SimpleFunc>,
        bound: Option<&Rat>,
    ) -> Result<CheckReport> {
        if chain.is_empty() {
            return Err(Error::Precondition("empty chain".into()));
        }
        for (i, w) in chain.windows(2).enumerate() {
            if !w[0].le(&w[1])? {
                return Err(Error::Precondition(format!("chain is not monotone at step {i}")));
            }
        }
        if let Some(l) = limit {
            if !chain.last().unwrap().le(l)? {
                return Err(Error::Precondition("limit is below the chain".into()));
            }
        }
        let ints = chain.iter().map(|f| self.lintegral(f)).collect::<Result<Vec<_>>>()?;
        let mut rep = CheckReport::new("monotone_convergence");
        for (i, v) in ints.iter().enumerate() {
            let ok = i == 0 || ints[i - 1] <= *v;
            rep.push(Record::new(0, format!("∫⁻ f_{i}")).value(Quantity::ext("integral", v)).pass_if(ok));
        }
        let last = ints.last().unwrap().clone();
        let (sup_integral, label) = match limit {
            Some(l) => (self.lintegral(l)?, "∫⁻ sup f_n"),
            None => (self.lintegral(chain.last().unwrap())?, "∫⁻ of the chain supremum"),
        };
        let sup_of_ints = ints.iter().max().unwrap().clone();
        let gap = sup_integral.abs_diff(&sup_of_ints);
        let allowed = bound.cloned().unwrap_or_else(Rat::zero);
        let mut r = Record::new(0, label)
            .value(Quantity::ext("sup_integrals", &sup_of_ints))
            .value(Quantity::ext("integral_of_sup", &sup_integral));
        if let Some(g) = gap.as_finite() {
            r = r.residual(g.clone());
        }
        let ok = gap.as_finite().is_some_and(|g| *g <= allowed) && last <= sup_integral;
        rep.push(r.pass_if(ok));
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::{FiniteSet, IntervalSet, Kind};
    use crate::simple::ho;

    fn iv(s: &str) -> Subset {
        Subset::Intervals(s.parse().unwrap())
    }

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn n(x: i64) -> ExtNonneg {
        ExtNonneg::int(x as u64)
    }

    fn leb() -> Measure {
        Measure::lebesgue(Rat::one())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(leb().eval(&iv("[0,1)")).unwrap(), n(1));
        let d = Measure::new(GroupSpec::RealAdd, MeasureSpec::dirac(Element::Num(q("0")))).unwrap();
        assert_eq!(d.eval(&iv("[1,2)")).unwrap(), n(0));
        let s3 = GroupSpec::symmetric(3);
        assert_eq!(Measure::counting(&s3).eval(&s3.full_set().unwrap()).unwrap(), n(6));
        let z = Measure::counting(&GroupSpec::IntAdd);
        assert_eq!(z.eval(&iv("[0,inf)")).unwrap(), ExtNonneg::Infinity);
        assert_eq!(z.eval(&iv("[0,5)")).unwrap(), n(5));
        assert!(Measure::new(GroupSpec::IntAdd, MeasureSpec::lebesgue(Rat::one())).is_err());
        assert!(leb().eval(&Subset::Points(FiniteSet::full(3))).is_err());
    }

    #[test]
    fn sigma_finiteness() {
        assert!(leb().is_sigma_finite());
        let cont = Measure::counting(&GroupSpec::RealAdd);
        assert!(!cont.is_sigma_finite());
        assert_eq!(cont.eval(&iv("[0,1)")).unwrap(), ExtNonneg::Infinity);
        assert_eq!(cont.eval(&iv("[2,2]")).unwrap(), n(1));
        let flagged = Measure::new(GroupSpec::RealAdd, MeasureSpec::lebesgue(Rat::one()).not_sigma_finite()).unwrap();
        assert!(!flagged.is_sigma_finite());
    }

    #[test]
    fn measure_spec_json() {
        let m: MeasureSpec = serde_json::from_str(r#"{"type":"lebesgue","scale":"3"}"#).unwrap();
        assert_eq!(m, MeasureSpec::lebesgue(Rat::int(3)));
        let m: MeasureSpec = serde_json::from_str(r#"{"type":"counting"}"#).unwrap();
        assert_eq!(m, MeasureSpec::counting());
        let m: MeasureSpec = serde_json::from_str(r#"{"type":"dirac","at":"0"}"#).unwrap();
        assert_eq!(m, MeasureSpec::dirac(Element::Num(Rat::zero())));
        let m: MeasureSpec = serde_json::from_str(
            r#"{"type":"haar","K0":{"kind":"closed","intervals":[["0","1"]]},"n":10}"#,
        )
        .unwrap();
        assert!(matches!(m.kind, MeasureKind::Haar { n: 10, .. }));
        let m: MeasureSpec = serde_json::from_str(r#"{"type":"counting","sigma_finite":false}"#).unwrap();
        assert!(!m.sigma_finite);
        assert_eq!(serde_json::to_string(&MeasureSpec::lebesgue(Rat::int(3))).unwrap(), r#"{"type":"lebesgue","scale":"3"}"#);
    }

    #[test]
    fn lintegral_examples() {
        let f = SimpleFunc::new(vec![(iv("[0,3)"), n(2)), (iv("[4,6)"), n(5))]).unwrap();
        // hand oracle: 2·3 + 5·2
        assert_eq!(leb().lintegral(&f).unwrap(), n(16));
        let a = iv("[1/3,5/2)");
        assert_eq!(leb().lintegral(&SimpleFunc::indicator(&a).unwrap()).unwrap(), leb().eval(&a).unwrap());
        let g = SimpleFunc::new(vec![(iv("∅"), ExtNonneg::Infinity)]).unwrap();
        assert_eq!(leb().lintegral(&g).unwrap(), n(0));
        let h = SimpleFunc::new(vec![(iv("[0,1)"), ExtNonneg::Infinity)]).unwrap();
        assert_eq!(leb().lintegral(&h).unwrap(), ExtNonneg::Infinity);
    }

    #[test]
    fn bintegral_examples() {
        let f = StepFuncVec::new(
            2,
            vec![(iv("[0,1)"), VecQ::from_ints(&[1, -2])), (iv("[1,4)"), VecQ::from_ints(&[0, 3]))],
        )
        .unwrap();
        assert_eq!(leb().bintegral(&f).unwrap(), VecQ::from_ints(&[1, 7]));
        assert!(leb().integrable(&f).unwrap());
        assert_eq!(leb().bintegral(&StepFuncVec::zero(2)).unwrap(), VecQ::zeros(2));
        let z = Measure::counting(&GroupSpec::IntAdd);
        let inf = StepFuncVec::new(2, vec![(iv("[0,inf)"), VecQ::from_ints(&[1, 0]))]).unwrap();
        assert_eq!(z.bintegral(&inf).unwrap(), VecQ::zeros(2));
        assert!(!z.integrable(&inf).unwrap());
        assert!(z.integrable(&StepFuncVec::zero(3)).unwrap());
    }

    #[test]
    fn bintegral_agrees_with_lintegral_when_integrable() {
        let f = SimpleFunc::new(vec![(iv("[0,1/2)"), n(3)), (iv("[2,5)"), ExtNonneg::Finite(q("7/4")))]).unwrap();
        let v = StepFuncVec::from_simple(&f).unwrap();
        assert_eq!(ExtNonneg::Finite(leb().bintegral(&v).unwrap().components()[0].clone()), leb().lintegral(&f).unwrap());
        let z = Measure::counting(&GroupSpec::IntAdd);
        let g = SimpleFunc::indicator(&iv("[0,inf)")).unwrap();
        assert_eq!(z.lintegral(&g).unwrap(), ExtNonneg::Infinity);
        assert!(z.bintegral(&StepFuncVec::from_simple(&g).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn left_invariance_examples() {
        let r = leb().left_invariance_check(&[(Element::Num(q("7/3")), iv("[0,1)"))]).unwrap();
        assert!(r.passed());
        let d = Measure::new(GroupSpec::RealAdd, MeasureSpec::dirac(Element::Num(q("0")))).unwrap();
        let r = d.left_invariance_check(&[(Element::Num(q("5")), iv("[0,1)"))]).unwrap();
        assert!(!r.passed());
        let s3 = GroupSpec::symmetric(3);
        let cases: Vec<_> = (0..6)
            .flat_map(|g| (0..64u64).map(move |m| (Element::Idx(g), Subset::Points(FiniteSet::from_mask(6, m)))))
            .collect();
        assert!(Measure::counting(&s3).left_invariance_check(&cases).unwrap().passed());
    }

    #[test]
    fn regularity_examples() {
        let sched = Schedule::dyadic(10);
        let tol = q("1/256");
        let r = leb().regular_check(&[iv("[0,1]")], &[iv("[0,1)"), iv("[0,1]")], &[iv("(0,1)")], &sched, &tol).unwrap();
        assert!(r.passed(), "{r:?}");
        // final gaps: 2^-10 for [0,1) and 2·2^-10 for the closed interval
        assert_eq!(r.records[2].residual, Some(Rat::dyadic(9)));
        let d = Measure::new(GroupSpec::RealAdd, MeasureSpec::dirac(Element::Num(q("0")))).unwrap();
        let r = d
            .regular_check(&[iv("[0,1]")], &[iv("[-1,0)"), iv("[0,1)")], &[iv("(-1,1)"), iv("(0,1)")], &sched, &Rat::zero())
            .unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(leb().regular_check(&[], &[], &[], &sched, &tol).unwrap().records.is_empty());
    }

    #[test]
    fn positivity_examples() {
        let f = SimpleFunc::constant_on(&iv("(0,1)"), n(3)).unwrap();
        let r = leb().positivity_check(&iv("(0,1)"), &f, &Rat::int(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.records[1].values[0].exact.as_deref(), Some("3"));
        let s3 = GroupSpec::symmetric(3);
        let e = Subset::Points(FiniteSet::singleton(6, 0).unwrap());
        let r = Measure::counting(&s3).positivity_check(&e, &SimpleFunc::indicator(&e).unwrap(), &Rat::one()).unwrap();
        assert!(r.passed());
        assert!(leb().positivity_check(&iv("(0,2)"), &f, &Rat::one()).is_err());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(leb().inv_eval(&iv("[2,5)")).unwrap(), n(3));
        let s3 = GroupSpec::symmetric(3);
        for g in 0..6 {
            let d = Measure::new(s3.clone(), MeasureSpec::dirac(Element::Idx(g))).unwrap();
            let ginv = s3.table().unwrap().inv(g);
            for m in 0..64u64 {
                let a = Subset::Points(FiniteSet::from_mask(6, m));
                let expect = (m >> ginv) & 1 == 1;
                assert_eq!(d.inv_eval(&a).unwrap(), ext(expect));
                assert_eq!(d.inverted().inverted().eval(&a).unwrap(), d.eval(&a).unwrap());
            }
        }
    }

    #[test]
    fn monotone_convergence_examples() {
        let unit = iv("[0,1)");
        let chain: Vec<SimpleFunc> = (0..=10)
            .map(|k| SimpleFunc::constant_on(&unit, ExtNonneg::Finite(Rat::one() - Rat::dyadic(k))).unwrap())
            .collect();
        let lim = SimpleFunc::indicator(&unit).unwrap();
        let r = leb().monotone_convergence_check(&chain, Some(&lim), Some(&Rat::dyadic(10))).unwrap();
        assert!(r.passed());
        assert_eq!(r.records.last().unwrap().residual, Some(Rat::dyadic(10)));
        let stab: Vec<SimpleFunc> =
            (1..=6).map(|k| SimpleFunc::indicator(&ho(Rat::zero(), Rat::int(k.min(3))).unwrap()).unwrap()).collect();
        let r = leb().monotone_convergence_check(&stab, None, None).unwrap();
        assert!(r.passed());
        assert_eq!(r.records.last().unwrap().values[1].exact.as_deref(), Some("3"));
        let bad = vec![SimpleFunc::indicator(&unit).unwrap(), SimpleFunc::zero()];
        assert!(matches!(leb().monotone_convergence_check(&bad, None, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn finite_additivity_and_monotonicity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let m = Measure::lebesgue(q("5/2"));
        for _ in 0..200 {
            let mut gen = || {
                let a = rng.random_range(-20i64..20);
                let w = rng.random_range(1i64..10);
                IntervalSet::half_open(Rat::new(a, 4), Rat::new(a + w, 4)).unwrap()
            };
            let (a, b) = (gen(), gen());
            let d = b.difference(&a).unwrap();
            let sa = Subset::Intervals(a.clone());
            let sd = Subset::Intervals(d);
            let u = Subset::Intervals(a.union(&b).unwrap());
            assert_eq!(m.eval(&u).unwrap(), m.eval(&sa).unwrap() + m.eval(&sd).unwrap());
            assert!(m.eval(&sa).unwrap() <= m.eval(&u).unwrap());
        }
        let _ = Kind::HalfOpen;
    }
}
