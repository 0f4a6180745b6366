//! Boundaries of definite fillings and obstructions from correction terms.
//!
//! A d-invariant table is input data: for each element of `H₁(Y)` the
//! correction term of the spin^c structure keyed by `PD(c₁)`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::corrterm::{self, constrained_min};
use crate::discform::{self, disc_group, DiscGroup, GroupElement, Limits, Subgroup};
use crate::error::{Error, Result};
use crate::exactmat::IntMatrix;
use crate::lattice::{make_lattice, DualVector, Lattice, Orientation};
use crate::overlattice::overlattice;
use crate::rational::{self, Rat};

pub const EVEN_ORDER_CAVEAT: &str = "H1 has even order: PD(c1) does not biject with spin^c structures, \
     so keying the table by group elements may merge or misplace correction terms";

const NEGATED_NOTE: &str = "input form was negative definite; computations use its negation, \
     which reverses the boundary orientation (pairing and d-values change sign)";

/// The boundary of a definite filling with `H₁(X) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FillingPresentation {
    pub lattice: Lattice,
    /// Discriminant group of the positive definite normalization.
    pub boundary_group: DiscGroup,
    /// Linking pairing of the boundary as oriented by the input form.
    pub linking: Vec<Vec<Rat>>,
}

impl FillingPresentation {
    pub fn orientation(&self) -> Orientation {
        self.lattice.orientation()
    }

    /// The boundary group carrying the linking pairing of the input orientation.
    pub fn boundary_form(&self) -> DiscGroup {
        match self.orientation() {
            Orientation::AsGiven => self.boundary_group.clone(),
            Orientation::Negated => self.boundary_group.negated(),
        }
    }
}

pub fn linking_form_of_filling(q: &IntMatrix) -> Result<FillingPresentation> {
    let lattice = make_lattice(q.clone())?;
    let boundary_group = disc_group(&lattice)?;
    let linking = match lattice.orientation() {
        Orientation::AsGiven => boundary_group.pairing().to_vec(),
        Orientation::Negated => boundary_group.negated().pairing().to_vec(),
    };
    Ok(FillingPresentation { lattice, boundary_group, linking })
}

// -- d-invariant tables -- //

#[derive(Clone, Debug, PartialEq)]
pub struct DInvariantTable {
    pub group: DiscGroup,
    pub values: BTreeMap<GroupElement, Rat>,
    pub z2_homology_sphere: bool,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    elem: Vec<u64>,
    #[serde(with = "rational::serde_rat")]
    value: Rat,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    orders: Vec<u64>,
    #[serde(with = "rational::serde_rat::matrix")]
    pairing: Vec<Vec<Rat>>,
    d: Vec<TableEntry>,
    z2_homology_sphere: bool,
}

impl DInvariantTable {
    /// Validates and assembles a table. Every element of the group needs a value.
    pub fn new(
        group: DiscGroup,
        entries: Vec<(GroupElement, Rat)>,
        z2_homology_sphere: bool,
        limits: &Limits,
    ) -> Result<DInvariantTable> {
        let odd = group.orders().iter().all(|d| d % 2 == 1);
        if odd != z2_homology_sphere {
            return Err(Error::InvalidTable(format!(
                "z2_homology_sphere is {z2_homology_sphere} but the group orders {:?} say otherwise",
                group.orders()
            )));
        }
        let elements = group.elements(limits)?;
        if !is_nondegenerate(&group, &elements) {
            return Err(Error::InvalidTable("linking pairing is degenerate".into()));
        }
        let mut values = BTreeMap::new();
        for (x, v) in entries {
            if x.0.len() != group.rank() || !group.is_valid(&x) {
                return Err(Error::InvalidTable(format!("element {:?} is not in the group", x.0)));
            }
            if values.insert(x.clone(), v).is_some() {
                return Err(Error::InvalidTable(format!("element {:?} listed twice", x.0)));
            }
        }
        if values.len() != elements.len() {
            return Err(Error::IncompleteTable(format!("{} of {} elements have a value", values.len(), elements.len())));
        }
        Ok(DInvariantTable { group, values, z2_homology_sphere })
    }

    pub fn from_json(text: &str, limits: &Limits) -> Result<DInvariantTable> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("d-table file: {e}")))?;
        let group = DiscGroup::from_table(file.orders, file.pairing)?;
        let entries = file.d.into_iter().map(|e| (GroupElement(e.elem), e.value)).collect();
        DInvariantTable::new(group, entries, file.z2_homology_sphere, limits)
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            orders: self.group.orders().to_vec(),
            pairing: self.group.pairing().to_vec(),
            d: self.values.iter().map(|(x, v)| TableEntry { elem: x.0.clone(), value: v.clone() }).collect(),
            z2_homology_sphere: self.z2_homology_sphere,
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    pub fn value(&self, x: &GroupElement) -> &Rat {
        &self.values[x]
    }

    /// The table of `-Y`: same group, negated pairing and values.
    pub fn reversed(&self) -> DInvariantTable {
        DInvariantTable {
            group: self.group.negated(),
            values: self.values.iter().map(|(x, v)| (x.clone(), -v)).collect(),
            z2_homology_sphere: self.z2_homology_sphere,
        }
    }
}

fn is_nondegenerate(g: &DiscGroup, elements: &[GroupElement]) -> bool {
    let gens: Vec<GroupElement> = (0..g.rank()).map(|i| g.generator(i)).collect();
    elements.iter().filter(|x| !x.is_zero()).all(|x| gens.iter().any(|y| !g.lambda(x, y).is_zero()))
}

// -- reports -- //

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Donaldson,
    RbCorrection,
    DefiniteFilling,
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    Unobstructed,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Unobstructed => 0,
            Verdict::Obstructed => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassValue {
    pub elem: GroupElement,
    #[serde(with = "rational::serde_rat")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetabolizerEvidence {
    pub metabolizer: Subgroup,
    /// Table values on the elements of the metabolizer.
    pub d_values: Vec<ClassValue>,
    #[serde(with = "rational::serde_rat::option")]
    pub d_overlattice: Option<Rat>,
    #[serde(with = "rational::serde_rat::option")]
    pub constrained_min: Option<Rat>,
    #[serde(with = "rational::serde_rat::option")]
    pub table_min: Option<Rat>,
    pub witness: Option<DualVector>,
}

impl MetabolizerEvidence {
    fn new(metabolizer: Subgroup) -> Self {
        MetabolizerEvidence {
            metabolizer,
            d_values: Vec::new(),
            d_overlattice: None,
            constrained_min: None,
            table_min: None,
            witness: None,
        }
    }

    /// `[0, d_U(M), constrained min, table min]`, as far as present.
    pub fn chain(&self) -> Vec<Rat> {
        let mut c = vec![Rat::zero()];
        c.extend([&self.d_overlattice, &self.constrained_min, &self.table_min].into_iter().flatten().cloned());
        c
    }

    /// Index of the first link `c[i] >= c[i+1]` that fails.
    pub fn failed_link(&self) -> Option<usize> {
        self.chain().windows(2).position(|w| w[0] < w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub test: TestKind,
    pub verdict: Verdict,
    pub z2_homology_sphere: bool,
    pub evidence: Vec<MetabolizerEvidence>,
    /// Conclusion about embedding in the standard lattice, when the test yields one.
    pub embeds: Option<bool>,
    pub orientation_note: Option<String>,
    pub caveat: Option<String>,
    pub reason: Option<String>,
}

fn all_zero(e: &MetabolizerEvidence) -> bool {
    e.d_values.iter().all(|c| c.value.is_zero())
}

fn all_positive(e: &MetabolizerEvidence) -> bool {
    e.d_values.iter().all(|c| c.value.is_positive())
}

/// The verdict a report's evidence implies.
pub fn derive_verdict(test: TestKind, z2_homology_sphere: bool, evidence: &[MetabolizerEvidence]) -> Verdict {
    let flag = |b: bool| if b { Verdict::Obstructed } else { Verdict::Unobstructed };
    match test {
        TestKind::Donaldson => flag(!evidence.iter().any(|e| e.d_overlattice.as_ref().is_some_and(Zero::is_zero))),
        TestKind::RbCorrection => {
            if !z2_homology_sphere {
                Verdict::Inconclusive
            } else {
                flag(!evidence.iter().any(all_zero))
            }
        }
        TestKind::DefiniteFilling => flag(evidence.iter().any(all_positive)),
        TestKind::Chain => flag(evidence.iter().any(|e| e.failed_link().is_some())),
    }
}

/// Embedding conclusion implied by the evidence, if any.
fn derive_embeds(test: TestKind, evidence: &[MetabolizerEvidence]) -> Option<bool> {
    match test {
        TestKind::Donaldson => Some(evidence.iter().any(|e| e.d_overlattice.as_ref().is_some_and(Zero::is_zero))),
        TestKind::Chain => {
            if evidence.iter().any(|e| e.failed_link().is_some()) {
                return None;
            }
            // a metabolizer with nonnegative table minimum forces d_U(M) = 0
            evidence
                .iter()
                .any(|e| e.table_min.as_ref().is_some_and(|m| !m.is_negative()))
                .then_some(true)
        }
        _ => None,
    }
}

fn report(
    test: TestKind,
    z2_homology_sphere: bool,
    evidence: Vec<MetabolizerEvidence>,
    orientation_note: Option<String>,
) -> ObstructionReport {
    let verdict = derive_verdict(test, z2_homology_sphere, &evidence);
    let embeds = derive_embeds(test, &evidence);
    let caveat = (!z2_homology_sphere).then(|| EVEN_ORDER_CAVEAT.to_string());
    let reason = if evidence.is_empty() {
        Some("no metabolizer exists".to_string())
    } else if test == TestKind::Chain {
        evidence.iter().enumerate().find_map(|(i, e)| {
            e.failed_link().map(|k| {
                let names = ["0", "d_U(M)", "constrained min", "table min"];
                format!(
                    "inconsistent input: {} >= {} fails for metabolizer #{i}; the table cannot belong to the boundary of this filling",
                    names[k],
                    names[k + 1]
                )
            })
        })
    } else {
        None
    };
    ObstructionReport { test, verdict, z2_homology_sphere, evidence, embeds, orientation_note, caveat, reason }
}

fn negated_note(l: &Lattice) -> Option<String> {
    (l.orientation() == Orientation::Negated).then(|| NEGATED_NOTE.to_string())
}

fn table_evidence(t: &DInvariantTable, m: Subgroup) -> MetabolizerEvidence {
    let mut e = MetabolizerEvidence::new(m);
    e.d_values =
        e.metabolizer.elements.iter().map(|x| ClassValue { elem: x.clone(), value: t.value(x).clone() }).collect();
    e.table_min = e.d_values.iter().map(|c| c.value.clone()).min();
    e
}

/// Obstruction to bounding a rational homology ball from the embedding of the filling.
pub fn donaldson_obstruction(q: &IntMatrix, limits: &Limits) -> Result<ObstructionReport> {
    let l = make_lattice(q.clone())?;
    let d = corrterm::d_set(&l, limits)?;
    let evidence = d
        .entries
        .into_iter()
        .map(|entry| {
            let mut e = MetabolizerEvidence::new(entry.metabolizer);
            e.d_overlattice = Some(entry.d);
            e.witness = Some(entry.witness);
            e
        })
        .collect();
    let z2 = l.discriminant().is_odd();
    let mut r = report(TestKind::Donaldson, z2, evidence, negated_note(&l));
    // the lattice test does not key spin^c structures
    r.caveat = None;
    Ok(r)
}

/// Some metabolizer must carry only vanishing correction terms.
pub fn rb_correction_obstruction(t: &DInvariantTable, limits: &Limits) -> Result<ObstructionReport> {
    let ms = discform::metabolizers_of(&t.group, limits)?;
    let evidence = ms.into_iter().map(|m| table_evidence(t, m)).collect();
    Ok(report(TestKind::RbCorrection, t.z2_homology_sphere, evidence, None))
}

/// Fires when a metabolizer carries only positive correction terms.
pub fn definite_filling_obstruction(t: &DInvariantTable, limits: &Limits) -> Result<ObstructionReport> {
    let ms = discform::metabolizers_of(&t.group, limits)?;
    let evidence = ms.into_iter().map(|m| table_evidence(t, m)).collect();
    let mut r = report(TestKind::DefiniteFilling, t.z2_homology_sphere, evidence, None);
    if r.evidence.is_empty() {
        r.reason = Some("no metabolizer exists, so the test does not apply".into());
    }
    Ok(r)
}

/// Checks `0 ≥ d_U(M) ≥ constrained min ≥ table min` for every metabolizer.
///
/// A negative definite filling is handled by reversing orientation: the
/// table is read as that of `-Y`.
pub fn chain_check(q: &IntMatrix, t: &DInvariantTable, limits: &Limits) -> Result<ObstructionReport> {
    let l = make_lattice(q.clone())?;
    let g = disc_group(&l)?;
    let t = match l.orientation() {
        Orientation::AsGiven => t.clone(),
        Orientation::Negated => t.reversed(),
    };
    if !g.same_form(&t.group) {
        return Err(Error::GroupMismatch(format!(
            "filling boundary has orders {:?} and pairing {}, table has orders {:?} and pairing {}",
            g.orders(),
            render_pairing(g.pairing()),
            t.group.orders(),
            render_pairing(t.group.pairing())
        )));
    }
    let ms = discform::metabolizers_of(&g, limits)?;
    let evidence = ms
        .into_iter()
        .map(|m| {
            let u = overlattice(&l, &g, &m)?.to_lattice()?;
            let d_u = corrterm::d_lattice(&u)?;
            let cm = constrained_min(&l, &g, &m, limits)?;
            let mut e = table_evidence(&t, m);
            e.d_overlattice = Some(d_u);
            e.constrained_min = Some(cm.value);
            e.witness = Some(cm.witness);
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(TestKind::Chain, t.z2_homology_sphere, evidence, negated_note(&l)))
}

pub fn render_pairing(p: &[Vec<Rat>]) -> String {
    let rows: Vec<String> =
        p.iter().map(|r| format!("[{}]", r.iter().map(rational::format).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// Per-class bound `min (χ² - n)/4 ≥ d(Y, x)` for every class hit by a characteristic covector.
///
/// Returns the classes where the table exceeds the lattice minimum.
pub fn class_bound_violations(q: &IntMatrix, t: &DInvariantTable, limits: &Limits) -> Result<Vec<GroupElement>> {
    let l = make_lattice(q.clone())?;
    let g = disc_group(&l)?;
    let t = if l.orientation() == Orientation::Negated { t.reversed() } else { t.clone() };
    if !g.same_form(&t.group) {
        return Err(Error::GroupMismatch("filling boundary and table differ".into()));
    }
    let mut bad = Vec::new();
    for x in g.elements(limits)? {
        if let Some(m) = corrterm::char_min_over_class(&l, &g, &x, limits)? {
            if &m.value < t.value(&x) {
                bad.push(x);
            }
        }
    }
    Ok(bad)
}

/// `d`-values over `x ∈ L*/L` that make the per-class bound sharp.
pub fn sharp_table(q: &IntMatrix, limits: &Limits) -> Result<Vec<(GroupElement, Option<Rat>)>> {
    let l = make_lattice(q.clone())?;
    let g = disc_group(&l)?;
    g.elements(limits)?
        .into_iter()
        .map(|x| Ok((x.clone(), corrterm::char_min_over_class(&l, &g, &x, limits)?.map(|m| m.value))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::negative_one_plus_a8_gram;
    use crate::rational::{int, rat};

    fn cyclic(n: u64, p: Rat) -> DiscGroup {
        DiscGroup::from_table(vec![n], vec![vec![p]]).unwrap()
    }

    fn table(group: DiscGroup, values: &[Rat]) -> DInvariantTable {
        let entries = values.iter().enumerate().map(|(i, v)| (group.element_at(i), v.clone())).collect();
        let z2 = group.orders().iter().all(|d| d % 2 == 1);
        DInvariantTable::new(group, entries, z2, &Limits::default()).unwrap()
    }

    fn s3_9() -> DInvariantTable {
        let v = [int(2), rat(-2, 9), rat(10, 9), int(0), rat(4, 9), rat(4, 9), int(0), rat(10, 9), rat(-2, 9)];
        table(cyclic(9, rat(8, 9)), &v)
    }

    fn z_table() -> DInvariantTable {
        let v = [int(2), rat(-4, 9), rat(2, 9), int(2), rat(8, 9), rat(8, 9), int(2), rat(2, 9), rat(-4, 9)];
        table(cyclic(9, rat(8, 9)), &v)
    }

    fn values(r: &ObstructionReport) -> Vec<Rat> {
        r.evidence[0].d_values.iter().map(|c| c.value.clone()).collect()
    }

    #[test]
    fn linking_forms() {
        let f = linking_form_of_filling(&IntMatrix::from_i64(&[vec![4]])).unwrap();
        assert_eq!(f.boundary_group.orders(), &[4]);
        assert_eq!(f.linking, vec![vec![rat(3, 4)]]);
        let f = linking_form_of_filling(&IntMatrix::from_i64(&[vec![9]])).unwrap();
        assert_eq!(f.linking, vec![vec![rat(8, 9)]]);
        let f = linking_form_of_filling(&IntMatrix::identity(3)).unwrap();
        assert!(f.boundary_group.orders().is_empty());
        // reversing the filling negates the pairing
        let f = linking_form_of_filling(&IntMatrix::from_i64(&[vec![-9]])).unwrap();
        assert_eq!(f.orientation(), Orientation::Negated);
        assert_eq!(f.linking, vec![vec![rat(1, 9)]]);
        assert_eq!(f.boundary_form().pairing(), f.linking.as_slice());
        assert!(matches!(
            linking_form_of_filling(&IntMatrix::from_i64(&[vec![1, 0], vec![0, -1]])),
            Err(Error::IndefiniteForm)
        ));
    }

    #[test]
    fn donaldson_examples() {
        let lim = Limits::default();
        let r = donaldson_obstruction(&negative_one_plus_a8_gram(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.evidence.len(), 1);
        assert_eq!(r.evidence[0].d_overlattice, Some(int(-2)));
        assert_eq!(r.embeds, Some(false));
        assert!(r.orientation_note.is_some());
        let r = donaldson_obstruction(&IntMatrix::from_i64(&[vec![9]]), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Unobstructed);
        assert_eq!(r.embeds, Some(true));
        assert_eq!(donaldson_obstruction(&IntMatrix::identity(4), &lim).unwrap().verdict, Verdict::Unobstructed);
    }

    #[test]
    fn rational_ball_examples() {
        let lim = Limits::default();
        let r = rb_correction_obstruction(&s3_9(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(values(&r), vec![int(2), int(0), int(0)]);
        let zero = table(cyclic(9, rat(8, 9)), &vec![int(0); 9]);
        assert_eq!(rb_correction_obstruction(&zero, &lim).unwrap().verdict, Verdict::Unobstructed);
        let r = rb_correction_obstruction(&z_table(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(values(&r), vec![int(2), int(2), int(2)]);
    }

    #[test]
    fn even_order_is_inconclusive() {
        let lim = Limits::default();
        let t = table(cyclic(4, rat(3, 4)), &[rat(-1, 4), int(0), rat(3, 4), int(0)]);
        let r = rb_correction_obstruction(&t, &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.verdict.exit_code(), 3);
        assert_eq!(r.caveat.as_deref(), Some(EVEN_ORDER_CAVEAT));
        assert_eq!(r.evidence.len(), 1);
        assert_eq!(r.evidence[0].metabolizer.elements, vec![GroupElement(vec![0]), GroupElement(vec![2])]);
        let zero = table(cyclic(4, rat(3, 4)), &vec![int(0); 4]);
        assert_eq!(rb_correction_obstruction(&zero, &lim).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn definite_filling_examples() {
        let lim = Limits::default();
        let r = definite_filling_obstruction(&z_table(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(values(&r), vec![int(2), int(2), int(2)]);
        assert_eq!(definite_filling_obstruction(&s3_9(), &lim).unwrap().verdict, Verdict::Unobstructed);
    }

    #[test]
    fn chain_examples() {
        let lim = Limits::default();
        let nine = IntMatrix::from_i64(&[vec![9]]);
        let r = chain_check(&nine, &s3_9(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Unobstructed);
        assert_eq!(r.evidence[0].chain(), vec![int(0); 4]);
        assert_eq!(r.embeds, Some(true));
        assert!(class_bound_violations(&nine, &s3_9(), &lim).unwrap().is_empty());

        let trivial = table(DiscGroup::from_table(vec![], vec![]).unwrap(), &[int(0)]);
        let r = chain_check(&IntMatrix::identity(3), &trivial, &lim).unwrap();
        assert_eq!(r.evidence[0].chain(), vec![int(0); 4]);
        assert_eq!(r.verdict, Verdict::Unobstructed);

        let fives = table(cyclic(9, rat(8, 9)), &vec![int(5); 9]);
        let r = chain_check(&nine, &fives, &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.evidence[0].failed_link(), Some(2));
        assert!(r.reason.unwrap().contains("inconsistent"));
        assert_eq!(r.embeds, None);

        // the Z table admits no positive definite filling
        assert_eq!(chain_check(&nine, &z_table(), &lim).unwrap().verdict, Verdict::Obstructed);
    }

    #[test]
    fn chain_rejects_mismatched_groups() {
        let lim = Limits::default();
        let other = table(cyclic(9, rat(1, 9)), &vec![int(0); 9]);
        let r = chain_check(&IntMatrix::from_i64(&[vec![9]]), &other, &lim);
        assert!(matches!(r, Err(Error::GroupMismatch(_))));
        // reversing both the filling and the table is consistent
        let r = chain_check(&IntMatrix::from_i64(&[vec![-9]]), &s3_9().reversed(), &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Unobstructed);
        assert!(r.orientation_note.is_some());
    }

    #[test]
    fn s3_9_table_is_the_sharp_bound_of_its_trace() {
        let sharp = sharp_table(&IntMatrix::from_i64(&[vec![9]]), &Limits::default()).unwrap();
        let t = s3_9();
        for (x, v) in sharp {
            assert_eq!(v.as_ref(), Some(t.value(&x)));
        }
    }

    #[test]
    fn table_validation() {
        let lim = Limits::default();
        let g = cyclic(9, rat(8, 9));
        let short: Vec<_> = (0..8).map(|i| (g.element_at(i), int(0))).collect();
        assert!(matches!(DInvariantTable::new(g.clone(), short, true, &lim), Err(Error::IncompleteTable(_))));
        let full: Vec<_> = (0..9).map(|i| (g.element_at(i), int(0))).collect();
        assert!(matches!(DInvariantTable::new(g.clone(), full.clone(), false, &lim), Err(Error::InvalidTable(_))));
        let mut dup = full.clone();
        dup[8].0 = GroupElement(vec![0]);
        assert!(matches!(DInvariantTable::new(g.clone(), dup, true, &lim), Err(Error::InvalidTable(_))));
        let mut out = full;
        out[8].0 = GroupElement(vec![9]);
        assert!(matches!(DInvariantTable::new(g, out, true, &lim), Err(Error::InvalidTable(_))));
        let degenerate = cyclic(9, rat(3, 9));
        let entries: Vec<_> = (0..9).map(|i| (degenerate.element_at(i), int(0))).collect();
        assert!(matches!(DInvariantTable::new(degenerate, entries, true, &lim), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn table_json_round_trip() {
        let t = z_table();
        let text = t.to_json();
        assert!(text.contains("\"-4/9\""));
        assert_eq!(DInvariantTable::from_json(&text, &Limits::default()).unwrap(), t);
    }

    #[test]
    fn report_verdict_is_derived_from_evidence() {
        let lim = Limits::default();
        for r in [
            rb_correction_obstruction(&s3_9(), &lim).unwrap(),
            definite_filling_obstruction(&z_table(), &lim).unwrap(),
            chain_check(&IntMatrix::from_i64(&[vec![9]]), &s3_9(), &lim).unwrap(),
        ] {
            assert_eq!(derive_verdict(r.test, r.z2_homology_sphere, &r.evidence), r.verdict);
            let back: ObstructionReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            assert_eq!(back, r);
        }
    }
}
