//! The full search: class-number-two orders, twists good outside at most
//! one prime, isogeny classes and their heavenly primes.

use super::reference::{reference_table, ReferenceRow};
use super::twists::{bad_support, twists_outside_one_prime, TwistKind};
use super::{
    class_number_1_discs, class_number_2_discs, curve_from_j, genus_shape_ok, hilbert_class_poly,
    isogeny_prime_candidates, root_field, CmOrderDisc,
};
use crate::ellcurve::good_outside;
use crate::heavenly::{heavenly_trace_test, three_torsion_heavenly_sample, two_torsion_heavenly, HeavenlyVerdict};
use crate::traces::{balanced_residues, matches_prediction, trace_records, trace_set_from};
use crate::{Curve, Elem, QuadField};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Traces at primes below this bound identify an isogeny class.
pub const FINGERPRINT_BOUND: u64 = 250;

#[derive(Clone, Debug, Serialize)]
pub struct FoundCurve {
    /// Discriminant of the CM order the j-invariant came from.
    pub order_disc: i64,
    pub j_rational: bool,
    pub twist: TwistKind,
    pub u: Elem,
    pub curve: Curve,
    /// Rational primes below the primes of bad reduction.
    pub bad: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub field_disc: i64,
    pub poly: String,
    pub m: i64,
    pub conductors: Vec<i64>,
    pub bad: Vec<u64>,
    pub everywhere_good: bool,
    pub ells: Vec<u64>,
    pub r_k: u32,
    pub r_q: u32,
    pub curves: Vec<FoundCurve>,
    pub verdicts: Vec<HeavenlyVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRow {
    pub label: String,
    pub ells: Vec<u64>,
    pub field_disc: i64,
    pub poly: String,
    pub m: i64,
    pub conductors: Vec<i64>,
    pub everywhere_good: bool,
    pub r_k: u32,
    pub r_q: u32,
    pub classes: Vec<ClassSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Matched,
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub label: String,
    pub status: RowStatus,
    pub expected: (u32, u32, u32),
    /// (classes, r_K, r_Q) found under the same row key, summed.
    pub found: (u32, u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub r_k: u32,
    pub r_q: u32,
    pub classes: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub p_bound: u64,
    pub seed: u64,
    pub discs_searched: usize,
    pub curves_found: usize,
    pub classes_found: usize,
    pub rows: Vec<SearchRow>,
    pub checks: Vec<RowCheck>,
    /// Rows with no counterpart in the reference table.
    pub unlisted: Vec<String>,
    pub totals: Totals,
}

type Fingerprint = Vec<(u64, u64, i64)>;

fn fingerprint(e: &Curve) -> Fingerprint {
    trace_records(e, FINGERPRINT_BOUND, &[], 0)
        .into_iter()
        .map(|r| (r.prime.p, r.prime.root.unwrap_or(0), r.a))
        .collect()
}

fn prime_divisors(n: i64) -> BTreeSet<u64> {
    let mut n = n.unsigned_abs();
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.insert(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}

fn twists_of(
    base: &Curve,
    kind: TwistKind,
    extra: &BTreeSet<u64>,
    order_disc: i64,
    j_rational: bool,
) -> Vec<FoundCurve> {
    let mut s = bad_support(base);
    s.extend(extra.iter().copied());
    let ells: Vec<Option<u64>> = std::iter::once(None).chain(s.iter().map(|&p| Some(p))).collect();
    twists_outside_one_prime(base, kind, &s, &ells)
        .into_iter()
        .map(|t| {
            let (ok, _) = good_outside(&t.curve, &t.bad);
            assert!(ok, "twist is bad outside its reported primes");
            FoundCurve { order_disc, j_rational, twist: t.kind, u: t.u, curve: t.curve, bad: t.bad }
        })
        .collect()
}

// Twists of both conjugate j-invariants of a class-number-two order.
fn irrational_curves(d: &CmOrderDisc) -> Option<(QuadField, Vec<FoundCurve>)> {
    let h = hilbert_class_poly(d.d).expect("class polynomial");
    let (k, roots) = root_field(&h[1], &h[0])?;
    if !k.is_real() {
        return None;
    }
    let extra = prime_divisors(d.d);
    let mut out = Vec::new();
    for j in &roots {
        let base = curve_from_j(j);
        for c in twists_of(&base, TwistKind::Quadratic, &extra, d.d, false) {
            let jj = c.curve.j().integral().expect("CM j-invariants are integral");
            let val = &(&jj * &(&jj + &k.int(h[1].clone()))) + &k.int(h[0].clone());
            assert!(val.is_zero(), "twist lost its j-invariant");
            out.push(c);
        }
    }
    Some((k, out))
}

struct Class {
    k: QuadField,
    curves: Vec<FoundCurve>,
    discs: BTreeSet<i64>,
}

fn verdicts_for(class: &Class, p_bound: u64, seed: u64) -> Vec<HeavenlyVerdict> {
    let rep = &class.curves[0].curve;
    let bad = &class.curves[0].bad;
    let ells: Vec<u64> = match bad.as_slice() {
        [] => {
            let mut c = BTreeSet::new();
            for &d in &class.discs {
                c.extend(isogeny_prime_candidates(&CmOrderDisc::new(d).unwrap()));
            }
            c.into_iter().collect()
        }
        [l] => vec![*l],
        _ => vec![],
    };
    ells.into_iter()
        .map(|ell| match ell {
            2 => {
                let vs: Vec<HeavenlyVerdict> = class.curves.iter().map(|c| two_torsion_heavenly(&c.curve)).collect();
                vs.iter().find(|v| !v.is_heavenly()).unwrap_or(&vs[0]).clone()
            }
            3 => three_torsion_heavenly_sample(rep, p_bound, seed),
            _ => {
                let v = heavenly_trace_test(rep, ell, p_bound, seed);
                if v.is_heavenly() {
                    check_balanced(rep, ell, p_bound, seed);
                }
                v
            }
        })
        .collect()
}

// Trace residues of a heavenly curve at l > 3 are balanced and agree with
// the predicted values at every unramified prime.
fn check_balanced(e: &Curve, ell: u64, p_bound: u64, seed: u64) {
    let recs = trace_records(e, p_bound, &[ell], seed);
    let ts = trace_set_from(&recs, ell, p_bound);
    assert!(ts.residues.is_subset(&balanced_residues(ell)), "unbalanced trace set at l = {ell}");
    for r in &recs {
        assert_ne!(matches_prediction(r, ell), Some(false), "trace off prediction at l = {ell}: {r:?}");
    }
}

fn summarize(class: &Class, verdicts: Vec<HeavenlyVerdict>, rational: Vec<FoundCurve>) -> ClassSummary {
    let k = class.k;
    let first = CmOrderDisc::new(*class.discs.iter().next().unwrap()).unwrap();
    let conductors: BTreeSet<i64> = class.discs.iter().map(|&d| CmOrderDisc::new(d).unwrap().f).collect();
    let ells: Vec<u64> = verdicts.iter().filter(|v| v.is_heavenly()).map(|v| v.ell).collect();
    for &l in &ells {
        for &d in &class.discs {
            assert!(genus_shape_ok(l, &CmOrderDisc::new(d).unwrap(), k.d()), "l = {l}, D = {d}");
        }
    }
    let r_q = rational.len() as u32;
    let mut curves = class.curves.clone();
    curves.extend(rational);
    ClassSummary {
        field_disc: k.disc(),
        poly: k.min_poly_label(),
        m: first.m,
        conductors: conductors.into_iter().collect(),
        bad: class.curves[0].bad.clone(),
        everywhere_good: class.curves[0].bad.is_empty(),
        ells,
        r_k: class.curves.len() as u32,
        r_q,
        curves,
        verdicts,
    }
}

fn rational_kind(j: &BigInt) -> TwistKind {
    if *j == BigInt::from(0) {
        TwistKind::Sextic
    } else if *j == BigInt::from(1728) {
        TwistKind::Quartic
    } else {
        TwistKind::Quadratic
    }
}

fn ell_label(ells: &[u64]) -> u64 {
    ells.iter().product()
}

type RowKey = (Vec<u64>, i64, i64, Vec<i64>, bool);

fn row_key_of(c: &ClassSummary) -> RowKey {
    (c.ells.clone(), c.field_disc, c.m, c.conductors.clone(), c.everywhere_good)
}

fn ref_key(r: &ReferenceRow, field_disc: i64) -> RowKey {
    (r.ells.to_vec(), field_disc, r.m, r.conductors.to_vec(), r.everywhere_good)
}

// Discriminant of the field with the given minimal polynomial label.
fn disc_of_poly(poly: &str) -> i64 {
    // T^2-c or T^2-T-c
    if let Some(c) = poly.strip_prefix("T^2-T-") {
        1 + 4 * c.parse::<i64>().unwrap()
    } else {
        4 * poly.strip_prefix("T^2-").unwrap().parse::<i64>().unwrap()
    }
}

fn build_rows(classes: Vec<ClassSummary>) -> Vec<SearchRow> {
    let mut groups: BTreeMap<(RowKey, u32, u32), Vec<ClassSummary>> = BTreeMap::new();
    for c in classes {
        groups.entry((row_key_of(&c), c.r_k, c.r_q)).or_default().push(c);
    }
    let mut rows: Vec<SearchRow> = groups
        .into_iter()
        .map(|((key, r_k, r_q), classes)| SearchRow {
            label: String::new(),
            ells: key.0,
            field_disc: key.1,
            poly: classes[0].poly.clone(),
            m: key.2,
            conductors: key.3,
            everywhere_good: key.4,
            r_k,
            r_q,
            classes,
        })
        .collect();
    rows.sort_by_key(|r| (ell_label(&r.ells), r.field_disc, r.everywhere_good, r.m, r.conductors.clone(), r.r_k, r.r_q));
    let mut next: BTreeMap<(u64, i64), usize> = BTreeMap::new();
    for r in &mut rows {
        let n = next.entry((ell_label(&r.ells), r.field_disc)).or_insert(0);
        let lo = *n + 1;
        *n += r.classes.len();
        let star = if r.everywhere_good { "*" } else { "" };
        let l = ell_label(&r.ells);
        r.label = if r.classes.len() == 1 {
            format!("{star}{l}.{}.{lo}", r.field_disc)
        } else {
            format!("{star}{l}.{}.{lo}-{l}.{}.{}", r.field_disc, r.field_disc, *n)
        };
    }
    rows
}

fn check_rows(rows: &[SearchRow]) -> (Vec<RowCheck>, Vec<String>) {
    let mut listed = BTreeSet::new();
    let checks = reference_table()
        .iter()
        .map(|r| {
            let key = ref_key(r, disc_of_poly(r.poly));
            listed.insert(key.clone());
            let same: Vec<&SearchRow> = rows
                .iter()
                .filter(|s| (s.ells.clone(), s.field_disc, s.m, s.conductors.clone(), s.everywhere_good) == key)
                .collect();
            let n: u32 = same.iter().map(|s| s.classes.len() as u32).sum();
            let rk: u32 = same.iter().map(|s| s.r_k * s.classes.len() as u32).sum();
            let rq: u32 = same.iter().map(|s| s.r_q * s.classes.len() as u32).sum();
            let exact = same.len() == 1 && n == r.classes && same[0].r_k == r.r_k && same[0].r_q == r.r_q;
            RowCheck {
                label: r.label.to_string(),
                status: if exact { RowStatus::Matched } else { RowStatus::Flagged },
                expected: (r.classes, r.r_k * r.classes, r.r_q * r.classes),
                found: (n, rk, rq),
            }
        })
        .collect();
    let unlisted = rows
        .iter()
        .filter(|s| !listed.contains(&(s.ells.clone(), s.field_disc, s.m, s.conductors.clone(), s.everywhere_good)))
        .map(|s| s.label.clone())
        .collect();
    (checks, unlisted)
}

/// Runs the whole search. The report depends only on the arguments.
pub fn run_search(p_bound: u64, seed: u64) -> SearchReport {
    let discs = class_number_2_discs();
    let per_disc: Vec<Option<(QuadField, Vec<FoundCurve>)>> = discs.par_iter().map(irrational_curves).collect();
    let mut found: Vec<(QuadField, FoundCurve)> = Vec::new();
    for (k, cs) in per_disc.into_iter().flatten() {
        found.extend(cs.into_iter().map(|c| (k, c)));
    }
    let curves_found = found.len();

    let prints: Vec<Fingerprint> = found.par_iter().map(|(_, c)| fingerprint(&c.curve)).collect();
    let mut by_print: BTreeMap<(i64, Fingerprint), Class> = BTreeMap::new();
    for ((k, c), fp) in found.into_iter().zip(prints) {
        let class = by_print.entry((k.d(), fp)).or_insert_with(|| Class { k, curves: vec![], discs: BTreeSet::new() });
        class.discs.insert(c.order_disc);
        class.curves.push(c);
    }
    let classes: Vec<((i64, Fingerprint), Class)> = by_print.into_iter().collect();
    let classes_found = classes.len();
    for (_, c) in &classes {
        let bad = &c.curves[0].bad;
        assert!(c.curves.iter().all(|x| &x.bad == bad), "isogenous curves with different bad primes");
    }

    let verdicts: Vec<Vec<HeavenlyVerdict>> = classes.par_iter().map(|(_, c)| verdicts_for(c, p_bound, seed)).collect();

    // rational j-invariants: twists of curves with CM by an order of the same L
    let mut pairs: BTreeMap<(i64, i64), BTreeSet<u64>> = BTreeMap::new();
    for ((_, c), vs) in classes.iter().zip(&verdicts) {
        if vs.iter().any(|v| v.is_heavenly()) {
            for &d in &c.discs {
                let od = CmOrderDisc::new(d).unwrap();
                pairs.entry((c.k.d(), od.fundamental())).or_default().extend(c.curves[0].bad.iter().copied());
            }
        }
    }
    let h1 = class_number_1_discs();
    let jobs: Vec<(QuadField, CmOrderDisc, BTreeSet<u64>)> = pairs
        .iter()
        .flat_map(|(&(kd, fund), extra)| {
            let k = QuadField::new(kd).unwrap();
            h1.iter().filter(move |d| d.fundamental() == fund).map(move |d| (k, *d, extra.clone()))
        })
        .collect();
    let rational: Vec<(QuadField, Vec<FoundCurve>)> = jobs
        .par_iter()
        .map(|(k, d, extra)| {
            let j = -hilbert_class_poly(d.d).unwrap()[0].clone();
            let base = curve_from_j(&k.int(j.clone()));
            let mut extra = extra.clone();
            extra.extend(prime_divisors(d.d));
            (*k, twists_of(&base, rational_kind(&j), &extra, d.d, true))
        })
        .collect();
    let mut attached: BTreeMap<(i64, Fingerprint), Vec<FoundCurve>> = BTreeMap::new();
    for (k, cs) in rational {
        for c in cs {
            let fp = fingerprint(&c.curve);
            attached.entry((k.d(), fp)).or_default().push(c);
        }
    }

    let summaries: Vec<ClassSummary> = classes
        .iter()
        .zip(verdicts)
        .filter(|(_, vs)| vs.iter().any(|v| v.is_heavenly()))
        .map(|((key, c), vs)| summarize(c, vs, attached.remove(key).unwrap_or_default()))
        .collect();
    let totals = Totals {
        r_k: summaries.iter().map(|c| c.r_k).sum(),
        r_q: summaries.iter().map(|c| c.r_q).sum(),
        classes: summaries.len() as u32,
    };
    let rows = build_rows(summaries);
    let (checks, unlisted) = check_rows(&rows);
    SearchReport {
        p_bound,
        seed,
        discs_searched: discs.len(),
        curves_found,
        classes_found,
        rows,
        checks,
        unlisted,
        totals,
    }
}

impl SearchReport {
    /// One line per row: l, m(T), m, conductors, r_K, r_Q, star.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,ell,poly,m,conductors,r_k,r_q,classes,star\n");
        for r in &self.rows {
            let ells: Vec<String> = r.ells.iter().map(|l| l.to_string()).collect();
            let fs: Vec<String> = r.conductors.iter().map(|f| f.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.label,
                ells.join(";"),
                r.poly,
                r.m,
                fs.join(";"),
                r.r_k,
                r.r_q,
                r.classes.len(),
                if r.everywhere_good { "*" } else { "" }
            ));
        }
        out
    }
}
