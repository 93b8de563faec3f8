use std::time::Instant;

use serde_json::{json, Value};

use super::cache::Workspace;
use super::report::{BackendOutcome, CheckResult, Item, Timing, VerificationReport};
use super::spec::{CheckKind, CheckSpec, CuspMode};
use crate::arith;
use crate::cyclo::{sanity_places, PlaceTable};
use crate::error::{Error, Result};
use crate::gm2k1::{bracket_symbol, calibrate_action, cocycle_check, lemma41_trials};
use crate::k2model::{TameContext, TameNorm, TameVector, CoinvariantCheck};
use crate::linalg::{rank_mod_p, Int, IntMatrix};
use crate::modsym::{
    cusp_count, degeneracy_matrix, diamond_matrix, genus, hecke_t_matrix, hecke_u_matrix,
    pi1_minus_diamond_pi2, prop31::prop31_check, scalar, sub, Degeneracy, HomElt, HomologyPresentation,
};
use crate::par;

const COCYCLE_PAIRS: usize = 100;
const SANITY_PLACES: usize = 3;

fn strings(v: &[Int]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn check_json(c: &CoinvariantCheck) -> Value {
    json!({ "residuals": c.residuals, "moduli": c.moduli, "inverted": c.inverted })
}

/// Kernel orbits of cusps of `X_1(N)` under `ker((Z/N)^* -> (Z/M)^*)` that lie
/// in `C_N^0`; with [`CuspMode::Infty`] only the orbit of infinity.
pub fn select_cusp_subset(pres: &HomologyPresentation, sublevel: u64, mode: CuspMode) -> Result<Vec<Vec<usize>>> {
    let n = pres.level();
    if sublevel == n {
        return Err(Error::InvalidCuspSubset(format!("sublevel equals the level {n}")));
    }
    let cusps = pres.cusps();
    let c0 = cusps.c0_upper();
    let mut orbits: Vec<Vec<usize>> =
        cusps.kernel_orbits(sublevel)?.into_iter().filter(|o| o.iter().all(|c| c0.contains(c))).collect();
    if mode == CuspMode::Infty {
        let inf = cusps.infinity();
        orbits.retain(|o| o.contains(&inf));
    }
    if orbits.is_empty() {
        return Err(Error::InvalidCuspSubset(format!("no kernel orbit in C^0 at level {n} over {sublevel}")));
    }
    Ok(orbits)
}

fn theorem1(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let (m, p) = (spec.level, spec.p.expect("validated"));
    let n = m * p;
    let (pn, pm) = (ws.presentation(n)?, ws.presentation(m)?);
    let (vn, vm) = (ws.varpi(n)?, ws.varpi(m)?);
    let (cn, cm) = (ws.tame(n, &[])?, ws.tame(m, &[p])?);
    let norm = TameNorm::new(&cn, &cm)?;
    let op = match spec.kind {
        CheckKind::Theorem1Divides => degeneracy_matrix(&pn, &pm, Degeneracy::Pi1)?,
        _ => pi1_minus_diamond_pi2(&pn, &pm)?,
    };
    let orbits = select_cusp_subset(&pn, m, spec.cusps)?;
    let mut work: Vec<(usize, usize, HomElt)> = Vec::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        for (j, h) in pn.subspace(orbit)?.basis().into_iter().enumerate() {
            work.push((oi, j, h));
        }
    }
    let items = par::map_slice(&work, |(oi, j, h)| -> Result<Item> {
        let top = norm.apply(&cn.eval(&vn.apply(h)?)?)?;
        let h2 = h.apply(&op, m);
        if pm.boundary_of(&h2).iter().any(|&x| x != 0) {
            return Err(Error::FalseRelation(format!("image of {:?} is not a cycle at level {m}", h.coords)));
        }
        let bottom = cm.eval(&vm.apply(&h2)?)?;
        let chk = cm.coinvariant_check(&top.sub(&bottom), &[2]);
        let keys: Vec<(u64, u64)> = orbits[*oi].iter().map(|&c| pn.cusps().classes()[c].key).collect();
        Ok(Item {
            label: format!("orbit {oi} basis {j}"),
            pass: chk.passes(),
            certificate: json!({
                "orbit": keys,
                "element": strings(&h.coords),
                "top_tame_trivial": top.is_trivial(),
                "bottom_tame_trivial": bottom.is_trivial(),
                "top": top.logs,
                "bottom": bottom.logs,
                "check": check_json(&chk),
            }),
        })
    });
    let items = items.into_iter().collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    if spec.backend.tame() {
        let trivial = items
            .iter()
            .filter(|i| i.certificate["top_tame_trivial"] == true && i.certificate["bottom_tame_trivial"] == true)
            .count();
        let mut o = BackendOutcome::new("tame", true, items);
        if trivial > 0 {
            o = o.with_note(format!("{trivial} element(s) have both sides tame-trivial"));
        }
        out.push(o);
    }
    if spec.backend.presented() {
        out.push(BackendOutcome::skipped("presented", "the norm on K_2 is not modeled in the presented backend"));
    }
    Ok(out)
}

/// Evaluates `varpi(h)` on each `h` with the tame backend (binding) and the
/// presented backend (report only).
fn annihilation(
    ws: &Workspace,
    spec: &CheckSpec,
    cases: Vec<(String, HomElt, HomElt)>,
    inverted: &[u64],
) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let v = ws.varpi(m)?;
    let symbols = par::map_slice(&cases, |(_, h, image)| -> Result<_> { Ok((v.apply(h)?, v.apply(image)?)) });
    let symbols = symbols.into_iter().collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    if spec.backend.tame() {
        let ctx = ws.tame(m, &[])?;
        let mut items = Vec::new();
        for ((label, h, _), (s0, s)) in cases.iter().zip(&symbols) {
            let chk = ctx.coinvariant_check(&ctx.eval(s)?, inverted);
            let before = ctx.coinvariant_check(&ctx.eval(s0)?, inverted);
            items.push(Item {
                label: label.clone(),
                pass: chk.passes(),
                certificate: json!({
                    "element": strings(&h.coords),
                    "source_vanishes": before.passes(),
                    "check": check_json(&chk),
                }),
            });
        }
        let vacuous = items.iter().filter(|i| i.certificate["source_vanishes"] == true).count();
        let mut o = BackendOutcome::new("tame", true, items);
        if vacuous > 0 {
            o = o.with_note(format!("{vacuous} element(s) already vanish before the operator"));
        }
        out.push(o);
    }
    if spec.backend.presented() {
        let model = ws.presented(m)?;
        let extra: Vec<u64> = inverted.iter().copied().filter(|&q| q != 2).collect();
        let mut items = Vec::new();
        for ((label, h, _), (_, s)) in cases.iter().zip(&symbols) {
            let res = model.residual(s, &extra)?;
            items.push(Item {
                label: label.clone(),
                pass: res.iter().all(|&x| x == 0),
                certificate: json!({
                    "element": strings(&h.coords),
                    "residual": strings(&res),
                    "invariants": strings(&model.invariants_inverting_two()),
                }),
            });
        }
        out.push(BackendOutcome::new("presented", false, items));
    }
    Ok(out)
}

fn atkin(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let pm = ws.presentation(m)?;
    let basis = pm.absolute()?.basis();
    let mut cases = Vec::new();
    for l in spec.ells() {
        let op = sub(&hecke_u_matrix(&pm, l)?, &scalar(pm.rank(), 1));
        for (j, h) in basis.iter().enumerate() {
            cases.push((format!("l={l} basis {j}"), h.clone(), h.apply(&op, m)));
        }
    }
    annihilation(ws, spec, cases, &[2, 3])
}

fn eisenstein(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let pm = ws.presentation(m)?;
    let basis = pm.subspace(&pm.cusps().orbit_of_infinity())?.basis();
    let mut cases = Vec::new();
    for l in spec.ells() {
        let t = hecke_t_matrix(&pm, l)?;
        let d = diamond_matrix(&pm, l % m)?;
        let op = sub(&sub(&t, &d.mul(&scalar(pm.rank(), l as Int))), &scalar(pm.rank(), 1));
        for (j, h) in basis.iter().enumerate() {
            cases.push((format!("l={l} basis {j}"), h.clone(), h.apply(&op, m)));
        }
    }
    annihilation(ws, spec, cases, &[2])
}

fn welldefined(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let v = ws.varpi(m)?;
    let kernel = v.kernel_basis()?;
    let symbols: Vec<_> = kernel.rows_iter().map(|r| (r.to_vec(), v.symbol_of(r))).collect();
    let mut out = Vec::new();
    if spec.backend.presented() {
        let model = ws.presented(m)?;
        let results = par::map_slice(&symbols, |(r, s)| -> Result<Item> {
            let res = model.residual(s, &[])?;
            Ok(Item {
                label: format!("kernel {}", strings(r).join(" ")),
                pass: res.iter().all(|&x| x == 0),
                certificate: json!({ "kernel_vector": strings(r), "residual": strings(&res) }),
            })
        });
        let items = results.into_iter().collect::<Result<Vec<_>>>()?;
        out.push(BackendOutcome::new("presented", true, items));
    }
    if spec.backend.tame() {
        let ctx = ws.tame(m, &[])?;
        let mut items = Vec::new();
        for (r, s) in &symbols {
            let chk = ctx.coinvariant_check(&ctx.eval(s)?, &[2]);
            items.push(Item {
                label: format!("kernel {}", strings(r).join(" ")),
                pass: chk.passes(),
                certificate: json!({ "kernel_vector": strings(r), "check": check_json(&chk) }),
            });
        }
        out.push(BackendOutcome::new("tame", true, items));
    }
    Ok(out)
}

fn sanity(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let mut groups = Vec::new();
    let mut count = 0;
    for ell in arith::primes_not_dividing(m, 16) {
        let places = sanity_places(m, ell)?;
        count += places.len();
        groups.push((ell, places));
        if count >= SANITY_PLACES {
            break;
        }
    }
    let ctx = TameContext::from_table(PlaceTable::from_groups(m, groups))?;
    let pm = ws.presentation(m)?;
    let v = ws.varpi(m)?;
    let basis = pm.subspace(&pm.cusps().c0_upper())?.basis();
    let primes: Vec<u64> = ctx.places().iter().map(|w| w.ell()).collect();
    let mut items = Vec::new();
    for (j, h) in basis.iter().enumerate() {
        let t: TameVector = ctx.eval(&v.apply(h)?)?;
        items.push(Item {
            label: format!("basis {j}"),
            pass: t.is_trivial(),
            certificate: json!({ "element": strings(&h.coords), "primes": primes, "logs": t.logs }),
        });
    }
    Ok(vec![BackendOutcome::new("tame", true, items).with_note(format!("{} places tested", ctx.places().len()))])
}

fn prop31(spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let r = prop31_check(spec.level)?;
    let item = Item { label: format!("level {}", spec.level), pass: r.pass, certificate: serde_json::to_value(&r)? };
    Ok(vec![BackendOutcome::new("exact", true, vec![item])])
}

fn lemma41(spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let (m, p) = (spec.level, spec.p.expect("validated"));
    let base = bracket_symbol(0, 1)?;
    let fixed = base.pushforward_alpha(p as i64) == base;
    let trials = lemma41_trials(m, p, spec.trials, spec.seed)?;
    let conv = calibrate_action()?;
    let cocycle = cocycle_check(conv, COCYCLE_PAIRS, spec.seed)?;
    let items = vec![
        Item { label: "alpha_* <0,1> = <0,1>".into(), pass: fixed, certificate: json!({ "p": p }) },
        Item { label: "random Gamma_0(Mp) elements".into(), pass: trials.pass, certificate: serde_json::to_value(&trials)? },
        Item { label: "cocycle identity".into(), pass: cocycle.pass, certificate: serde_json::to_value(&cocycle)? },
    ];
    Ok(vec![BackendOutcome::new("exact", true, items)])
}

/// Rank modulo `p` of `pi_1 - <p> pi_2` from `H_1(X_1(Mp), Z)` to
/// `H_1(X_1(M), Z)`, with `2 g(M)`.
pub fn surjectivity_rank(ws: &Workspace, m: u64, p: u64) -> Result<(usize, usize)> {
    let (pn, pm) = (ws.presentation(m * p)?, ws.presentation(m)?);
    let op = pi1_minus_diamond_pi2(&pn, &pm)?;
    let target = pm.absolute()?;
    let mut rows = Vec::new();
    for h in pn.absolute()?.basis() {
        let image = h.apply(&op, m);
        let c = target
            .coordinates(&image)
            .ok_or_else(|| Error::FalseRelation(format!("image of {:?} is not a cycle", h.coords)))?;
        rows.push(c);
    }
    let mat = IntMatrix::from_rows(target.dim(), &rows);
    Ok((rank_mod_p(&mat, p), 2 * genus(m) as usize))
}

fn surjectivity(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let (m, p) = (spec.level, spec.p.expect("validated"));
    let (rank, expected) = surjectivity_rank(ws, m, p)?;
    let item = Item {
        label: format!("rank mod {p}"),
        pass: rank == expected,
        certificate: json!({ "rank": rank, "expected": expected }),
    };
    Ok(vec![BackendOutcome::new("exact", true, vec![item])])
}

fn oracles(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    let m = spec.level;
    let pm = ws.presentation(m)?;
    let (rank, g) = (pm.absolute()?.dim(), genus(m) as usize);
    let (cusps, expected) = (pm.cusps().len(), cusp_count(m) as usize);
    let items = vec![
        Item { label: "rank = 2 genus".into(), pass: rank == 2 * g, certificate: json!({ "rank": rank, "genus": g }) },
        Item {
            label: "cusp count".into(),
            pass: cusps == expected,
            certificate: json!({ "enumerated": cusps, "formula": expected }),
        },
    ];
    Ok(vec![BackendOutcome::new("exact", true, items)])
}

fn dispatch(ws: &Workspace, spec: &CheckSpec) -> Result<Vec<BackendOutcome>> {
    spec.validate()?;
    match spec.kind {
        CheckKind::Theorem1Divides | CheckKind::Theorem1Coprime => theorem1(ws, spec),
        CheckKind::Atkin => atkin(ws, spec),
        CheckKind::Eisenstein => eisenstein(ws, spec),
        CheckKind::Prop31 => prop31(spec),
        CheckKind::Lemma41 => lemma41(spec),
        CheckKind::Welldefined => welldefined(ws, spec),
        CheckKind::SanityIntegrality => sanity(ws, spec),
        CheckKind::Surjectivity => surjectivity(ws, spec),
        CheckKind::Oracles => oracles(ws, spec),
    }
}

/// Runs one check; errors become a failed result carrying the message.
pub fn run_check(ws: &Workspace, spec: &CheckSpec) -> CheckResult {
    match dispatch(ws, spec) {
        Ok(outcomes) => CheckResult::from_outcomes(spec.clone(), outcomes),
        Err(e) => CheckResult::from_error(spec.clone(), e.to_string()),
    }
}

pub fn run_checks(ws: &Workspace, specs: &[CheckSpec]) -> VerificationReport {
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let start = Instant::now();
        checks.push(run_check(ws, s));
        timings.push(Timing { check: i, millis: start.elapsed().as_millis() });
    }
    VerificationReport::new(checks, timings)
}
