use k2modsym::cyclo::text::{lattice_from_text, lattice_to_text, places_from_text, places_to_text};
use k2modsym::cyclo::{PlaceTable, RelationLattice};
use k2modsym::gm2k1::{bracket_symbol, del_theta, K1Elem};
use k2modsym::harness::{run_checks, Backend, CheckKind, CheckSpec, Workspace};
use k2modsym::k2model::{PresentedK2, SymbolicK2, Varpi};
use k2modsym::modsym::{CuspSelector, HomologyPresentation, PresentationRecord};
use std::sync::Arc;

#[test]
fn lattices_and_place_tables_round_trip() {
    for m in [5u64, 8, 12, 15] {
        let lat = RelationLattice::build(m).unwrap();
        let text = lattice_to_text(&lat);
        let back = lattice_from_text(&text).unwrap();
        assert_eq!(lattice_to_text(&back), text);
        let a = PresentedK2::from_lattice(back).unwrap();
        assert_eq!(a.invariants_inverting_two(), PresentedK2::build(m).unwrap().invariants_inverting_two());

        let table = PlaceTable::with_extra_primes(m, &[7]).unwrap();
        let text = places_to_text(&table);
        assert_eq!(places_to_text(&places_from_text(&text).unwrap()), text);
    }
}

#[test]
fn tampered_lattice_is_rejected() {
    let text = lattice_to_text(&RelationLattice::build(7).unwrap());
    let line = text.lines().find(|l| l.starts_with("relation inversion")).unwrap();
    let (head, vec) = line.split_once(':').unwrap();
    let mut v: Vec<i64> = vec.split_whitespace().map(|x| x.parse().unwrap()).collect();
    v[2] += 1;
    let bad = format!("{head}: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    assert!(lattice_from_text(&text.replace(line, &bad)).is_err());
}

#[test]
fn presentation_records_round_trip() {
    let pres = HomologyPresentation::new(13).unwrap();
    for sel in [CuspSelector::All, CuspSelector::C0, CuspSelector::Cinf, CuspSelector::None] {
        let rec = PresentationRecord::new(&pres, sel).unwrap();
        assert_eq!(PresentationRecord::from_text(&rec.to_text()).unwrap(), rec);
    }
}

#[test]
fn symbols_round_trip_through_json() {
    let v = Varpi::new(Arc::new(HomologyPresentation::new(11).unwrap())).unwrap();
    let pres = v.presentation().clone();
    for h in pres.absolute().unwrap().basis() {
        let s = v.apply(&h).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: SymbolicK2 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
    let x = del_theta([2, 1, 5, 3]).unwrap().mul(&bracket_symbol(3, -7).unwrap());
    let back: K1Elem = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(back, x);
}

#[test]
fn reports_are_deterministic() {
    let specs = vec![
        CheckSpec::new(CheckKind::Lemma41, 4).with_p(2).with_trials(30, 5),
        CheckSpec::new(CheckKind::Atkin, 14).with_backend(Backend::Both),
        CheckSpec::new(CheckKind::Theorem1Coprime, 4).with_p(3),
    ];
    let a = run_checks(&Workspace::new(None), &specs).body().unwrap();
    let b = run_checks(&Workspace::new(None), &specs).body().unwrap();
    assert_eq!(a, b);
    let other = run_checks(&Workspace::new(None), &[CheckSpec::new(CheckKind::Lemma41, 4).with_p(2).with_trials(30, 6)]);
    assert_ne!(other.fingerprint, run_checks(&Workspace::new(None), &specs[..1]).fingerprint);
}
