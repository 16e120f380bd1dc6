//! Theorem statements run as executable properties over a registry of
//! instances. Each check gates on certified hypotheses and then evaluates
//! the conclusion; a certified-false conclusion is reported as `FALSIFIED`
//! together with the offending witness.

use num_traits::Zero;
use serde::Serialize;

use crate::crmap::{CrMap, TransversalOrder};
use crate::families::{self, BlowupParams, FamilyError};
use crate::hypersurface::{Convention, NormalHypersurface};
use crate::linalg::{generic_rank, scalar_determinant, SeriesMatrix};
use crate::scalar::{self, Scalar};
use crate::series::{FormalMap, MultiIndex, Series};
use crate::verdict::{Status, Verdict, Witness};

pub const NONFLAT_IMPLIES_TRANSVERSAL: &str = "nonflat_implies_transversal";
pub const JACOBIAN_IMPLIES_TRANSVERSAL: &str = "jacobian_implies_transversal";
pub const CONSTANT_OR_TRANSVERSAL: &str = "constant_or_transversal";
pub const TRANSVERSAL_IFF_NONDEGENERATE: &str = "transversal_iff_not_totally_degenerate";
pub const NONDEGENERATE_SOURCE_JACOBIAN: &str = "nondegenerate_source_jacobian";
pub const NORMAL_COMPONENT_CONSTANT: &str = "normal_component_constant";
pub const TRANSVERSAL_ORDER_BOUND: &str = "transversal_order_bound";
pub const SELF_MAP_DICHOTOMY: &str = "self_map_dichotomy";
pub const TYPE_WINDOW_DICHOTOMY: &str = "type_window_dichotomy";
pub const BASIC_IDENTITY: &str = "basic_identity";
pub const TRANSVERSAL_SELF_MAP_AUTOMORPHISM: &str = "transversal_self_map_automorphism";
pub const SELF_MAP_AUTOMORPHISM: &str = "self_map_automorphism";
pub const UNBOUNDED_ORDER_CONTROL: &str = "unbounded_order_at_type_one";
pub const LINEAR_PART_INVERTIBLE: &str = "linear_part_invertible";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuiteStatus {
    Confirmed,
    HypothesisNotCertified,
    /// Hypotheses certified but the conclusion is undecided at this truncation.
    Inconclusive,
    #[serde(rename = "FALSIFIED")]
    Falsified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(name: &str, verdict: Verdict) -> Self {
        Check {
            name: name.to_string(),
            verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSuiteResult {
    pub theorem: String,
    pub instance: String,
    pub hypotheses: Vec<Check>,
    pub conclusion: Option<Check>,
    pub status: SuiteStatus,
    pub notes: Vec<String>,
}

/// A map together with its source and target.
#[derive(Debug, Clone)]
pub struct MapInstance {
    pub id: String,
    pub source_id: String,
    pub target_id: String,
    pub source: NormalHypersurface,
    pub target: NormalHypersurface,
    pub map: CrMap,
    /// The target is known by construction to contain no formal curve.
    pub target_without_curves: bool,
    /// Set for instances that exist to exercise exclusion or a boundary case.
    pub control: Option<String>,
}

impl MapInstance {
    pub fn is_self_map(&self) -> bool {
        self.source_id == self.target_id
    }
}

/// Data `(A, B, r)` for the relation `A(z, chi) = r A(B(z), Bbar(chi))`.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub id: String,
    pub n: usize,
    /// Series in `(z_1..z_n, chi_1..chi_n)`.
    pub a: Series,
    pub b: FormalMap,
    pub r: Scalar,
    pub control: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConventionResolution {
    pub convention: Convention,
    pub sends_into: Verdict,
}

#[derive(Debug, Clone)]
pub struct Registry {
    pub degree: u32,
    pub convention: Convention,
    pub seed: u64,
    pub finite_type: Vec<MapInstance>,
    pub infinite_type: Vec<MapInstance>,
    pub relations: Vec<RelationInstance>,
    /// The blowup grid searched for pairs in the window `1 < m' <= m < 2m' - 1`.
    pub window_grid: Vec<(u32, u32)>,
}

fn instance(
    source_id: &str,
    source: NormalHypersurface,
    target_id: &str,
    target: NormalHypersurface,
    map_id: &str,
    map: CrMap,
) -> MapInstance {
    let id = if source_id == target_id {
        format!("{source_id} self-map {map_id}")
    } else {
        format!("{source_id} -> {target_id} via {map_id}")
    };
    MapInstance {
        id,
        source_id: source_id.to_string(),
        target_id: target_id.to_string(),
        source,
        target,
        map,
        target_without_curves: false,
        control: None,
    }
}

fn z_map(c: Scalar, g: Series) -> CrMap {
    let d = g.trunc_degree();
    let z = Series::variable(2, d, 0).scale(&c).assume_exact();
    CrMap::new(vec![z], g).expect("pointed")
}

fn flat_map(d: u32) -> CrMap {
    z_map(scalar::from_int(1), Series::zero(2, d).assume_exact())
}

fn zero_map(d: u32) -> CrMap {
    z_map(Scalar::zero(), Series::zero(2, d).assume_exact())
}

impl Registry {
    /// The shipped registry at truncation degree `degree`.
    pub fn standard(degree: u32, convention: Convention, seed: u64) -> Result<Self, FamilyError> {
        let d = degree;
        let one = scalar::from_int(1);
        let i = scalar::imag_unit();
        let w = |d| Series::variable(2, d, 1).assume_exact();

        let mut finite = Vec::new();
        let heis1 = families::heisenberg(1, d, convention)?;
        let heis2 = families::heisenberg(2, d, convention)?;
        finite.push(instance(
            "heisenberg(1)",
            heis1.clone(),
            "heisenberg(1)",
            heis1.clone(),
            "identity",
            CrMap::identity(1, d),
        ));
        finite.push(instance(
            "heisenberg(2)",
            heis2.clone(),
            "heisenberg(2)",
            heis2.clone(),
            "identity",
            CrMap::identity(2, d),
        ));
        finite.push(instance(
            "heisenberg(1)",
            heis1.clone(),
            "heisenberg(1)",
            heis1.clone(),
            "(i*z, w)",
            families::dilation(i.clone(), d),
        ));
        let psi = families::psi_example(d);
        let mpsi = families::m_psi(&psi, 2, d, convention)?;
        finite.push(instance(
            "m_psi(z1, z1*z2)",
            mpsi,
            "heisenberg(2)",
            heis2.clone(),
            "(psi, w)",
            families::psi_map(&psi, 2, d)?,
        ));
        let (rm, rm2, rh) = families::remark_instance(d, convention)?;
        let mut remark = instance(
            "Im w = |z w|^2",
            rm.clone(),
            "heisenberg(1)",
            rm2.clone(),
            "(z, z*w)",
            rh,
        );
        remark.control = Some("the stated map fails sends_into under both conventions; Jac and transversality still separate".into());
        finite.push(remark);
        let zw = &Series::variable(2, d, 0) * &Series::variable(2, d, 1);
        let swapped = CrMap::new(vec![zw.assume_exact()], w(d)).expect("pointed");
        finite.push(instance(
            "Im w = |z w|^2",
            rm,
            "heisenberg(1)",
            rm2,
            "(z*w, w)",
            swapped,
        ));
        let mut zero = instance(
            "heisenberg(1)",
            heis1.clone(),
            "heisenberg(1)",
            heis1,
            "(0, 0)",
            zero_map(d),
        );
        zero.control = Some("constant map: transversally flat".into());
        finite.push(zero);
        for inst in &mut finite {
            inst.target_without_curves = inst.target_id.starts_with("heisenberg");
        }

        let mut infinite = Vec::new();
        let blowup = |b, c| families::blowup_hypersurface(b, c, d, convention);
        let h11 = families::blowup_map(1, 1, d)?;
        for (src, tgt) in [((4, 4), (3, 4)), ((3, 1), (2, 1)), ((2, 1), (1, 1))] {
            infinite.push(instance(
                &format!("blowup{src:?}"),
                blowup(src.0, src.1)?,
                &format!("blowup{tgt:?}"),
                blowup(tgt.0, tgt.1)?,
                "H(1,1)",
                h11.clone(),
            ));
        }
        let m23 = blowup(2, 3)?;
        for (name, map) in [
            ("identity", CrMap::identity(1, d)),
            ("(-z, w)", families::dilation(scalar::from_int(-1), d)),
            ("(i*z, w)", families::dilation(i.clone(), d)),
            ("(z, 0)", flat_map(d)),
        ] {
            infinite.push(instance(
                "blowup(2, 3)",
                m23.clone(),
                "blowup(2, 3)",
                m23.clone(),
                name,
                map,
            ));
        }
        let m1 = families::exp_model(1, d)?;
        for k in [1u32, 2] {
            let mk = families::exp_model(k, d)?;
            let id = format!("exp_model({k})");
            for (name, map) in [
                ("identity", CrMap::identity(1, d)),
                ("(-z, w)", families::dilation(scalar::from_int(-1), d)),
                ("(i*z, w)", families::dilation(i.clone(), d)),
            ] {
                infinite.push(instance(&id, mk.clone(), &id, mk.clone(), name, map));
            }
            let mut neg = instance(
                &id,
                mk.clone(),
                &id,
                mk.clone(),
                "(2*z, w)",
                families::dilation(scalar::from_int(2), d),
            );
            neg.control = Some("does not preserve the hypersurface".into());
            infinite.push(neg);
        }
        for k in [2u32, 3] {
            infinite.push(instance(
                &format!("exp_model({k})"),
                families::exp_model(k, d)?,
                "exp_model(1)",
                m1.clone(),
                &format!("T({k})"),
                families::tk_map(k, d)?,
            ));
        }
        for k in [4u32, 9] {
            if k < d {
                let mut inst = instance(
                    "exp_model(1)",
                    m1.clone(),
                    "exp_model(1)",
                    m1.clone(),
                    &format!("H({k})"),
                    families::hk_map(k, d)?,
                );
                inst.control = Some("target type m' = 1 admits unbounded transversal order".into());
                infinite.push(inst);
            }
        }
        let m2 = families::exp_model(2, d)?;
        let h4 = z_map(scalar::from_int(2), w(d).pow(4).assume_exact());
        infinite.push(instance(
            "exp_model(2)",
            m2.clone(),
            "exp_model(2)",
            m2,
            "(2*z, w^4)",
            h4,
        ));

        let mut relations = Vec::new();
        let pairing = |n: usize| {
            let mut a = Series::zero(2 * n, d);
            for j in 0..n {
                a = &a + &(&Series::variable(2 * n, d, j) * &Series::variable(2 * n, d, n + j));
            }
            a.assume_exact()
        };
        for n in [1usize, 2] {
            let neg_id = FormalMap::new(
                (0..n)
                    .map(|j| {
                        Series::variable(n, d, j)
                            .scale(&scalar::from_int(-1))
                            .assume_exact()
                    })
                    .collect(),
            )
            .expect("same arity");
            relations.push(RelationInstance {
                id: format!("sum z_j chi_j (n = {n}), B = -id"),
                n,
                a: pairing(n),
                b: neg_id,
                r: one.clone(),
                control: None,
            });
        }
        let rotation = FormalMap::new(vec![Series::variable(1, d, 0).scale(&i).assume_exact()])
            .expect("one component");
        relations.push(RelationInstance {
            id: "z chi, B = i z".into(),
            n: 1,
            a: pairing(1),
            b: rotation,
            r: one.clone(),
            control: None,
        });
        let exp_a = &pairing(1).scale(&i).exp_series()? - &Series::one(2, d);
        let neg = FormalMap::new(vec![Series::variable(1, d, 0)
            .scale(&scalar::from_int(-1))
            .assume_exact()])
        .expect("one component");
        relations.push(RelationInstance {
            id: "exp(i z chi) - 1, B = -z".into(),
            n: 1,
            a: exp_a,
            b: neg,
            r: one.clone(),
            control: None,
        });
        let square = FormalMap::new(vec![Series::variable(1, d, 0).pow(2).assume_exact()])
            .expect("one component");
        relations.push(RelationInstance {
            id: "z chi, B = z^2".into(),
            n: 1,
            a: pairing(1),
            b: square,
            r: one,
            control: Some("relation fails at the first coefficient".into()),
        });

        let mut window_grid = Vec::new();
        for b in 1..=4 {
            for c in 1..=4 {
                if BlowupParams::new(b, c).is_ok() {
                    window_grid.push((b, c));
                }
            }
        }

        finite.sort_by(|a, b| a.id.cmp(&b.id));
        infinite.sort_by(|a, b| a.id.cmp(&b.id));
        relations.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Registry {
            degree,
            convention,
            seed,
            finite_type: finite,
            infinite_type: infinite,
            relations,
            window_grid,
        })
    }

    pub fn map_instances(&self) -> impl Iterator<Item = &MapInstance> {
        self.finite_type.iter().chain(self.infinite_type.iter())
    }
}

/// `sends_into` of the basic non-transversal example under each convention.
pub fn remark_convention_resolution(degree: u32) -> Vec<ConventionResolution> {
    Convention::ALL
        .iter()
        .map(|&convention| {
            let sends_into = families::remark_instance(degree, convention)
                .map_err(|e| e.to_string())
                .and_then(|(m, m2, h)| h.sends_into(&m, &m2).map_err(|e| e.to_string()))
                .unwrap_or_else(|e| Verdict::unknown(Witness::note(e), degree));
            ConventionResolution {
                convention,
                sends_into,
            }
        })
        .collect()
}

fn all_of(name: &str, parts: &[&Verdict]) -> Check {
    let d = parts.iter().map(|v| v.degree_used).min().unwrap_or(0);
    let verdict = if let Some(bad) = parts.iter().find(|v| v.is_false()) {
        (*bad).clone()
    } else if parts.iter().all(|v| v.is_true()) {
        Verdict::certified_true(Witness::None, d)
    } else {
        Verdict::unknown(Witness::note("a conjunct is unknown at this truncation"), d)
    };
    Check::new(name, verdict)
}

fn any_of(name: &str, parts: &[&Verdict]) -> Check {
    let d = parts.iter().map(|v| v.degree_used).min().unwrap_or(0);
    let verdict = if let Some(good) = parts.iter().find(|v| v.is_true()) {
        (*good).clone()
    } else if parts.iter().all(|v| v.is_false()) {
        let text = parts
            .iter()
            .map(|v| format!("{:?}", v.witness))
            .collect::<Vec<_>>()
            .join("; ");
        Verdict::certified_false(Witness::note(text), d)
    } else {
        Verdict::unknown(Witness::note("no disjunct certified"), d)
    };
    Check::new(name, verdict)
}

fn evaluate(
    theorem: &str,
    instance: &str,
    hypotheses: Vec<Check>,
    conclusion: impl FnOnce() -> Result<Check, String>,
    mut notes: Vec<String>,
) -> TheoremSuiteResult {
    let (conclusion, status) = if hypotheses.iter().all(|h| h.verdict.is_true()) {
        match conclusion() {
            Ok(c) => {
                let status = match c.verdict.status {
                    Status::CertifiedTrue => SuiteStatus::Confirmed,
                    Status::CertifiedFalse => SuiteStatus::Falsified,
                    Status::UnknownAtTruncation => SuiteStatus::Inconclusive,
                };
                (Some(c), status)
            }
            Err(e) => {
                notes.push(format!("conclusion not computable: {e}"));
                (None, SuiteStatus::Inconclusive)
            }
        }
    } else {
        (None, SuiteStatus::HypothesisNotCertified)
    };
    TheoremSuiteResult {
        theorem: theorem.to_string(),
        instance: instance.to_string(),
        hypotheses,
        conclusion,
        status,
        notes,
    }
}

fn error_result(theorem: &str, instance: &str, e: String) -> TheoremSuiteResult {
    TheoremSuiteResult {
        theorem: theorem.to_string(),
        instance: instance.to_string(),
        hypotheses: Vec::new(),
        conclusion: None,
        status: SuiteStatus::HypothesisNotCertified,
        notes: vec![format!("instance data not computable: {e}")],
    }
}

/// Verdicts shared by several statements, computed once per instance.
struct Facts {
    sends: Verdict,
    flat: Verdict,
    nonflat: Verdict,
    transversal: Verdict,
    not_totally_degenerate: Verdict,
    jac: Verdict,
    class_c: Verdict,
    nondegenerate: Verdict,
    constant: Verdict,
    trord: Option<TransversalOrder>,
    source_type: Option<u32>,
    target_type: Option<u32>,
}

fn facts(inst: &MapInstance, seed: u64) -> Result<Facts, String> {
    let m = &inst.source;
    let h = &inst.map;
    let k_max = m.trunc_degree().saturating_sub(1);
    let sends = h.sends_into(m, &inst.target).map_err(|e| e.to_string())?;
    let flat = h.is_transversally_flat();
    let d = h.trunc_degree();
    let constant = if h.components().iter().all(|c| c.is_zero() && c.is_exact()) {
        Verdict::certified_true(Witness::None, d)
    } else if let Some(c) = h.components().iter().find(|c| !c.is_zero()) {
        Verdict::certified_false(Witness::leading("H", c), d)
    } else {
        Verdict::unknown(Witness::note(format!("H vanishes up to degree {d}")), d)
    };
    Ok(Facts {
        sends,
        nonflat: flat.clone().negate(),
        flat,
        transversal: h.is_cr_transversal(),
        not_totally_degenerate: h
            .is_not_totally_degenerate(seed)
            .map_err(|e| e.to_string())?,
        jac: h.is_jac_nonzero().map_err(|e| e.to_string())?,
        class_c: m.is_class_c(k_max, seed).map_err(|e| e.to_string())?,
        nondegenerate: m
            .is_holomorphically_nondegenerate(k_max, seed)
            .map_err(|e| e.to_string())?,
        constant,
        trord: h.transversal_order().ok(),
        source_type: m.infinite_type(),
        target_type: inst.target.infinite_type(),
    })
}

fn control_notes(inst: &MapInstance) -> Vec<String> {
    inst.control
        .iter()
        .map(|c| format!("control: {c}"))
        .collect()
}

/// Statements about maps into hypersurfaces of finite type.
pub fn suite_finite_type(registry: &Registry) -> Vec<TheoremSuiteResult> {
    let mut out = Vec::new();
    for inst in &registry.finite_type {
        let id = inst.id.as_str();
        let f = match facts(inst, registry.seed) {
            Ok(f) => f,
            Err(e) => {
                out.push(error_result(NONFLAT_IMPLIES_TRANSVERSAL, id, e));
                continue;
            }
        };
        let notes = control_notes(inst);
        let class_c = Check::new("source in class C", f.class_c.clone());
        let sends = Check::new("sends_into", f.sends.clone());

        out.push(evaluate(
            NONFLAT_IMPLIES_TRANSVERSAL,
            id,
            vec![
                class_c.clone(),
                sends.clone(),
                Check::new("transversally nonflat", f.nonflat.clone()),
            ],
            || {
                Ok(all_of(
                    "not totally degenerate and CR-transversal",
                    &[&f.not_totally_degenerate, &f.transversal],
                ))
            },
            notes.clone(),
        ));
        out.push(evaluate(
            JACOBIAN_IMPLIES_TRANSVERSAL,
            id,
            vec![
                class_c.clone(),
                sends.clone(),
                Check::new("Jac H nonzero", f.jac.clone()),
            ],
            || Ok(Check::new("CR-transversal", f.transversal.clone())),
            notes.clone(),
        ));
        let mut curve_notes = notes.clone();
        curve_notes.push(
            "partial coverage: the curve-free target hypothesis is known by construction".into(),
        );
        let no_curves = if inst.target_without_curves {
            Verdict::certified_true(
                Witness::note("strongly pseudoconvex model"),
                registry.degree,
            )
        } else {
            Verdict::unknown(Witness::note("not known by construction"), registry.degree)
        };
        out.push(evaluate(
            CONSTANT_OR_TRANSVERSAL,
            id,
            vec![
                class_c.clone(),
                sends.clone(),
                Check::new("target contains no formal curve", no_curves),
            ],
            || {
                Ok(any_of(
                    "constant or CR-transversal",
                    &[&f.constant, &f.transversal],
                ))
            },
            curve_notes,
        ));
        out.push(evaluate(
            TRANSVERSAL_IFF_NONDEGENERATE,
            id,
            vec![class_c.clone(), sends.clone()],
            || {
                let (a, b) = (&f.transversal, &f.not_totally_degenerate);
                let d = a.degree_used.min(b.degree_used);
                let w = Witness::note(format!(
                    "CR-transversal: {:?}, not totally degenerate: {:?}",
                    a.status, b.status
                ));
                let v = if a.is_certified() && b.is_certified() {
                    if a.status == b.status {
                        Verdict::certified_true(w, d)
                    } else {
                        Verdict::certified_false(w, d)
                    }
                } else {
                    Verdict::unknown(w, d)
                };
                Ok(Check::new("CR-transversal iff not totally degenerate", v))
            },
            notes.clone(),
        ));
        let mut hnd_notes = notes.clone();
        if inst.control.is_some() && inst.source_id.contains("|z w|") {
            for r in remark_convention_resolution(registry.degree) {
                hnd_notes.push(format!(
                    "convention {}: sends_into {:?}",
                    r.convention, r.sends_into.status
                ));
            }
            hnd_notes.push(format!(
                "Jac H nonzero: {:?}, CR-transversal: {:?}",
                f.jac.status, f.transversal.status
            ));
        }
        out.push(evaluate(
            NONDEGENERATE_SOURCE_JACOBIAN,
            id,
            vec![
                Check::new(
                    "source holomorphically nondegenerate",
                    f.nondegenerate.clone(),
                ),
                sends.clone(),
                Check::new("transversally nonflat", f.nonflat.clone()),
            ],
            || Ok(Check::new("Jac H nonzero", f.jac.clone())),
            hnd_notes,
        ));
    }
    out
}

fn type_check(name: &str, t: Option<u32>, d: u32) -> Check {
    Check::new(
        name,
        match t {
            Some(m) => Verdict::certified_true(Witness::note(format!("m = {m}")), d),
            None => Verdict::unknown(Witness::note("infinite type not established"), d),
        },
    )
}

fn predicate(name: &str, holds: bool, text: String, d: u32) -> Check {
    let w = Witness::note(text);
    Check::new(
        name,
        if holds {
            Verdict::certified_true(w, d)
        } else {
            Verdict::certified_false(w, d)
        },
    )
}

/// Statements about maps between hypersurfaces of infinite type.
pub fn suite_infinite_type(registry: &Registry) -> Vec<TheoremSuiteResult> {
    let mut out = Vec::new();
    let seed = registry.seed;
    let mut window_hits = 0usize;
    for inst in &registry.infinite_type {
        let id = inst.id.as_str();
        let f = match facts(inst, seed) {
            Ok(f) => f,
            Err(e) => {
                out.push(error_result(NORMAL_COMPONENT_CONSTANT, id, e));
                continue;
            }
        };
        let d = registry.degree;
        let h = &inst.map;
        let m = &inst.source;
        let notes = control_notes(inst);
        let sends = Check::new("sends_into", f.sends.clone());
        let src = type_check("source of infinite type", f.source_type, d);
        let tgt = type_check("target of infinite type", f.target_type, d);
        let trord_finite = Check::new(
            "finite transversal order",
            match f.trord {
                Some(TransversalOrder::Finite(k)) => {
                    Verdict::certified_true(Witness::note(format!("trord = {k}")), d)
                }
                Some(TransversalOrder::InfinityAtTruncation(t)) => Verdict::certified_false(
                    Witness::note(format!("G vanishes up to degree {t}")),
                    t,
                ),
                None => Verdict::unknown(Witness::note("G has a pure z-term"), d),
            },
        );
        let self_map = predicate(
            "self-map",
            inst.is_self_map(),
            format!("{} -> {}", inst.source_id, inst.target_id),
            d,
        );
        let (mm, mm2) = (f.source_type.unwrap_or(0), f.target_type.unwrap_or(0));

        out.push(evaluate(
            NORMAL_COMPONENT_CONSTANT,
            id,
            vec![
                src.clone(),
                tgt.clone(),
                sends.clone(),
                trord_finite.clone(),
            ],
            || {
                h.normal_component_reality_check(m, &inst.target)
                    .map(|v| Check::new("G_{w^k}(z,0) is a real nonzero constant", v))
                    .map_err(|e| e.to_string())
            },
            notes.clone(),
        ));
        let mut bound_notes = notes.clone();
        if mm2 == 1 {
            bound_notes.push("m' = 1: the bound is vacuous and places no limit on trord".into());
        }
        out.push(evaluate(
            TRANSVERSAL_ORDER_BOUND,
            id,
            vec![
                src.clone(),
                tgt.clone(),
                sends.clone(),
                Check::new("transversally nonflat", f.nonflat.clone()),
            ],
            || {
                h.trord_bound_check(m, &inst.target)
                    .map(|v| Check::new("(m'-1) trord <= m-1", v))
                    .map_err(|e| e.to_string())
            },
            bound_notes,
        ));
        if mm2 == 1
            && inst
                .control
                .as_deref()
                .is_some_and(|c| c.contains("unbounded"))
        {
            if let Some(TransversalOrder::Finite(k)) = f.trord {
                out.push(evaluate(
                    UNBOUNDED_ORDER_CONTROL,
                    id,
                    vec![tgt.clone(), sends.clone()],
                    || Ok(predicate("trord exceeds m - 1", k > mm.saturating_sub(1), format!("trord = {k}, m = {mm}"), d)),
                    vec!["negative control: a bound of the form (m'-1) trord <= m-1 says nothing when m' = 1".into()],
                ));
            }
        }
        let dichotomy = || {
            Ok(any_of(
                "CR-transversal or image in E",
                &[&f.transversal, &f.flat],
            ))
        };
        out.push(evaluate(
            SELF_MAP_DICHOTOMY,
            id,
            vec![
                src.clone(),
                predicate("m >= 2", mm >= 2, format!("m = {mm}"), d),
                self_map.clone(),
                sends.clone(),
            ],
            dichotomy,
            notes.clone(),
        ));
        let in_window = 1 < mm2 && mm2 <= mm && mm < 2 * mm2 - 1;
        if in_window && f.sends.is_true() {
            window_hits += 1;
        }
        out.push(evaluate(
            TYPE_WINDOW_DICHOTOMY,
            id,
            vec![
                src.clone(),
                tgt.clone(),
                predicate(
                    "1 < m' <= m < 2m' - 1",
                    in_window,
                    format!("m = {mm}, m' = {mm2}"),
                    d,
                ),
                sends.clone(),
            ],
            dichotomy,
            notes.clone(),
        ));
        let transversal = Check::new("CR-transversal", f.transversal.clone());
        out.push(evaluate(
            BASIC_IDENTITY,
            id,
            vec![
                src.clone(),
                self_map.clone(),
                sends.clone(),
                transversal.clone(),
            ],
            || {
                h.basid_check(m)
                    .map(|v| Check::new("Qtilde identity", v))
                    .map_err(|e| e.to_string())
            },
            notes.clone(),
        ));
        let k_max = m.trunc_degree().saturating_sub(1);
        let class_cm = match f.source_type {
            Some(t) => m
                .is_class_cm(t, k_max, seed)
                .unwrap_or_else(|e| Verdict::unknown(Witness::note(e.to_string()), d)),
            None => Verdict::unknown(Witness::note("infinite type not established"), d),
        };
        let class_cm = Check::new("source in class C_m", class_cm);
        let automorphism = Check::new("automorphism", h.is_automorphism());
        out.push(evaluate(
            TRANSVERSAL_SELF_MAP_AUTOMORPHISM,
            id,
            vec![
                class_cm.clone(),
                self_map.clone(),
                sends.clone(),
                transversal,
            ],
            || Ok(automorphism.clone()),
            notes.clone(),
        ));
        out.push(evaluate(
            SELF_MAP_AUTOMORPHISM,
            id,
            vec![
                class_cm,
                predicate("m >= 2", mm >= 2, format!("m = {mm}"), d),
                self_map,
                sends,
            ],
            || {
                Ok(any_of(
                    "image in E or automorphism",
                    &[&f.flat, &automorphism.verdict],
                ))
            },
            notes,
        ));
    }
    if window_hits == 0 {
        let grid = format!("{:?}", registry.window_grid);
        out.push(TheoremSuiteResult {
            theorem: TYPE_WINDOW_DICHOTOMY.into(),
            instance: "window search".into(),
            hypotheses: Vec::new(),
            conclusion: None,
            status: SuiteStatus::Confirmed,
            notes: vec![format!(
                "vacuously confirmed: no instance in the window; searched grid {grid}"
            )],
        });
    }
    out
}

/// `r A(B(z), Bbar(chi))` for `A` in `(z, chi)`.
fn pulled_back(inst: &RelationInstance) -> Result<Series, String> {
    let n = inst.n;
    let a = 2 * n;
    let mut args = Vec::with_capacity(a);
    for c in inst.b.components() {
        args.push(c.embed(a, &(0..n).collect::<Vec<_>>()));
    }
    for c in inst.b.components() {
        args.push(c.conjugate().embed(a, &(n..a).collect::<Vec<_>>()));
    }
    Ok(inst
        .a
        .compose(&args)
        .map_err(|e| e.to_string())?
        .scale(&inst.r))
}

/// Generic rank of `chi -> (A_{z^alpha}(0, chi))_{|alpha| <= k}` reaching `n`.
fn relation_rank(inst: &RelationInstance, seed: u64) -> Result<Verdict, String> {
    let n = inst.n;
    let z: Vec<usize> = (0..n).collect();
    let d = inst.a.trunc_degree();
    let mut rows = Vec::new();
    let mut last = None;
    for k in 0..d {
        for alpha in MultiIndex::all_of_degree(n, k) {
            let c = inst
                .a
                .coefficient_in_block(&z, &alpha)
                .map_err(|e| e.to_string())?;
            let row = (0..n)
                .map(|j| c.partial_derivative(j))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            rows.push(row);
        }
        let rank = generic_rank(
            &SeriesMatrix::from_rows(rows.clone()).map_err(|e| e.to_string())?,
            seed,
        );
        let done = rank.rank >= n;
        last = Some(rank);
        if done {
            break;
        }
    }
    Ok(match last {
        Some(r) => r.at_least(n),
        None => Verdict::unknown(Witness::note("no jets available"), d),
    })
}

/// `A = r A(B, Bbar)` with the rank condition forces an invertible `dB(0)`.
pub fn suite_linear_part(registry: &Registry) -> Vec<TheoremSuiteResult> {
    let mut out = Vec::new();
    for inst in &registry.relations {
        let notes: Vec<String> = inst
            .control
            .iter()
            .map(|c| format!("control: {c}"))
            .collect();
        let d = inst.a.trunc_degree();
        let relation = match pulled_back(inst) {
            Ok(rhs) => {
                let diff = &inst.a - &rhs;
                if diff.is_zero() {
                    Verdict::certified_true(Witness::None, diff.trunc_degree())
                } else {
                    Verdict::certified_false(
                        Witness::leading("A - r A(B, Bbar)", &diff),
                        diff.trunc_degree(),
                    )
                }
            }
            Err(e) => Verdict::unknown(Witness::note(e), d),
        };
        let rank = relation_rank(inst, registry.seed)
            .unwrap_or_else(|e| Verdict::unknown(Witness::note(e), d));
        let r_nonzero = predicate(
            "r nonzero",
            !inst.r.is_zero(),
            format!("r = {}", scalar::format(&inst.r)),
            d,
        );
        out.push(evaluate(
            LINEAR_PART_INVERTIBLE,
            &inst.id,
            vec![
                Check::new("generic rank n", rank),
                r_nonzero,
                Check::new("A = r A(B, Bbar)", relation),
            ],
            || {
                let n = inst.n;
                let lin: Vec<Vec<Scalar>> = inst
                    .b
                    .components()
                    .iter()
                    .map(|c| (0..n).map(|j| c.coeff(&MultiIndex::unit(n, j))).collect())
                    .collect();
                let det = scalar_determinant(&lin);
                let w = Witness::value("det B_z(0)", &det);
                Ok(Check::new(
                    "det B_z(0) nonzero",
                    if det.is_zero() {
                        Verdict::certified_false(w, d)
                    } else {
                        Verdict::certified_true(w, d)
                    },
                ))
            },
            notes,
        ));
    }
    out
}

/// All suites, ordered by suite, then instance, then statement.
pub fn run_all(registry: &Registry) -> Vec<TheoremSuiteResult> {
    let mut out = suite_finite_type(registry);
    out.extend(suite_infinite_type(registry));
    out.extend(suite_linear_part(registry));
    out
}

pub fn count(results: &[TheoremSuiteResult], status: SuiteStatus) -> usize {
    results.iter().filter(|r| r.status == status).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry() -> Registry {
        Registry::standard(10, Convention::TwoI, 7).unwrap()
    }

    fn find<'a>(
        rs: &'a [TheoremSuiteResult],
        theorem: &str,
        instance: &str,
    ) -> &'a TheoremSuiteResult {
        rs.iter()
            .find(|r| r.theorem == theorem && r.instance == instance)
            .unwrap_or_else(|| panic!("no result for {theorem} on {instance}"))
    }

    #[test]
    fn finite_suite_has_no_falsification() {
        let rs = suite_finite_type(&registry());
        assert_eq!(count(&rs, SuiteStatus::Falsified), 0, "{rs:#?}");
        let psi = "m_psi(z1, z1*z2) -> heisenberg(2) via (psi, w)";
        assert_eq!(
            find(&rs, NONFLAT_IMPLIES_TRANSVERSAL, psi).status,
            SuiteStatus::Confirmed
        );
        assert_eq!(
            find(&rs, JACOBIAN_IMPLIES_TRANSVERSAL, psi).status,
            SuiteStatus::Confirmed
        );
        let zero = find(
            &rs,
            CONSTANT_OR_TRANSVERSAL,
            "heisenberg(1) self-map (0, 0)",
        );
        assert_eq!(zero.status, SuiteStatus::Confirmed);
        let hnd = find(
            &rs,
            NONDEGENERATE_SOURCE_JACOBIAN,
            "Im w = |z w|^2 -> heisenberg(1) via (z*w, w)",
        );
        assert_eq!(hnd.status, SuiteStatus::Confirmed);
    }

    #[test]
    fn infinite_suite_has_no_falsification() {
        let rs = suite_infinite_type(&registry());
        assert_eq!(
            count(&rs, SuiteStatus::Falsified),
            0,
            "{:#?}",
            rs.iter()
                .filter(|r| r.status == SuiteStatus::Falsified)
                .collect::<Vec<_>>()
        );
        let r = find(
            &rs,
            TRANSVERSAL_ORDER_BOUND,
            "blowup(4, 4) -> blowup(3, 4) via H(1,1)",
        );
        assert_eq!(r.status, SuiteStatus::Confirmed);
        let r = find(
            &rs,
            TYPE_WINDOW_DICHOTOMY,
            "blowup(3, 1) -> blowup(2, 1) via H(1,1)",
        );
        assert_eq!(r.status, SuiteStatus::Confirmed);
        let r = find(&rs, SELF_MAP_AUTOMORPHISM, "blowup(2, 3) self-map (-z, w)");
        assert_eq!(r.status, SuiteStatus::Confirmed);
        let r = find(&rs, SELF_MAP_AUTOMORPHISM, "blowup(2, 3) self-map (z, 0)");
        assert_eq!(r.status, SuiteStatus::Confirmed);
        let r = find(&rs, BASIC_IDENTITY, "exp_model(2) self-map (2*z, w)");
        assert_eq!(r.status, SuiteStatus::HypothesisNotCertified);
        let r = find(&rs, UNBOUNDED_ORDER_CONTROL, "exp_model(1) self-map H(9)");
        assert_eq!(r.status, SuiteStatus::Confirmed);
    }

    #[test]
    fn linear_part_suite() {
        let rs = suite_linear_part(&registry());
        assert_eq!(count(&rs, SuiteStatus::Falsified), 0);
        assert_eq!(
            find(&rs, LINEAR_PART_INVERTIBLE, "exp(i z chi) - 1, B = -z").status,
            SuiteStatus::Confirmed
        );
        let neg = find(&rs, LINEAR_PART_INVERTIBLE, "z chi, B = z^2");
        assert_eq!(neg.status, SuiteStatus::HypothesisNotCertified);
        assert!(neg.hypotheses[2].verdict.is_false());
    }

    #[test]
    fn class_c_implies_nondegenerate_on_registry() {
        let reg = registry();
        for inst in reg.map_instances() {
            let k = inst.source.trunc_degree() - 1;
            if inst.source.is_class_c(k, reg.seed).unwrap().is_true() {
                assert!(
                    inst.source
                        .is_holomorphically_nondegenerate(k, reg.seed)
                        .unwrap()
                        .is_true(),
                    "{}",
                    inst.id
                );
            }
        }
    }

    #[test]
    fn no_falsification_under_either_convention() {
        for conv in Convention::ALL {
            let rs = run_all(&Registry::standard(10, conv, 3).unwrap());
            let bad: Vec<_> = rs
                .iter()
                .filter(|r| r.status == SuiteStatus::Falsified)
                .collect();
            assert!(bad.is_empty(), "{conv}: {bad:#?}");
            assert!(count(&rs, SuiteStatus::Confirmed) > 20);
        }
    }

    #[test]
    fn remark_resolution_is_recorded() {
        let res = remark_convention_resolution(8);
        assert_eq!(res.len(), 2);
        assert!(res.iter().all(|r| r.sends_into.is_false()));
    }
}
