//! Acceptance criteria A1-A10. Prints one line per criterion to stderr
//! (bypassing output capture) and fails if any criterion fails.

use std::io::Write;

use k2modsym::gm2k1::{bracket_symbol, calibrate_action, cocycle_check, lemma41_trials, ActionConvention};
use k2modsym::harness::{run_check, surjectivity_rank, Backend, CheckKind, CheckResult, CheckSpec, Status, Workspace};
use k2modsym::modsym::{prop31::prop31_check, HomologyPresentation};

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn report(lines: &[Line]) {
    let mut err = std::io::stderr().lock();
    for l in lines {
        let _ = writeln!(err, "{} {} {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
}

fn tally(r: &CheckResult, backend: &str) -> String {
    match r.outcomes.iter().find(|o| o.backend == backend) {
        Some(o) if o.status == Status::Skipped => "skipped".to_string(),
        Some(o) => format!("{}/{}", o.passed, o.total),
        None => r.error.clone().unwrap_or_else(|| "missing".into()),
    }
}

fn checks(ws: &Workspace, specs: Vec<CheckSpec>, id: &'static str, label: impl Fn(&CheckSpec) -> String) -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for s in specs {
        let r = run_check(ws, &s);
        pass &= r.status == Status::Pass;
        let mut part = label(&s);
        if s.backend.tame() {
            part.push_str(&format!(" tame {}", tally(&r, "tame")));
        }
        if s.backend.presented() {
            part.push_str(&format!(" presented {}", tally(&r, "presented")));
        }
        parts.push(part);
    }
    Line { id, pass, detail: parts.join("; ") }
}

/// Cusps of `Gamma_1(N)` as orbits of `+-(1 b; 0 1)` on vectors of order `N`
/// in `(Z/N)^2`.
fn brute_cusps(n: u64) -> usize {
    let n = n as usize;
    let idx = |a: usize, c: usize| a * n + c;
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut members = Vec::new();
    for a in 0..n {
        for c in 0..n {
            if gcd(gcd(a, c), n) != 1 {
                continue;
            }
            members.push(idx(a, c));
            for target in [idx((a + c) % n, c), idx((n - a) % n, (n - c) % n)] {
                let (x, y) = (find(&mut parent, idx(a, c)), find(&mut parent, target));
                parent[x] = y;
            }
        }
    }
    let mut roots: Vec<usize> = members.iter().map(|&m| find(&mut parent, m)).collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

/// Genus from the index of `+-Gamma_1(N)` and a brute-force cusp count
/// (`N >= 4`, so there are no elliptic points).
fn brute_genus(n: u64) -> i64 {
    let nn = n as usize;
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let order_n = (0..nn).flat_map(|a| (0..nn).map(move |c| (a, c))).filter(|&(a, c)| gcd(gcd(a, c), nn) == 1).count();
    let mu = (order_n / 2) as i64;
    let cusps = brute_cusps(n) as i64;
    let twelve_g = 12 + mu - 6 * cusps;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

/// Genera of `X_1(N)` for `N = 1..=30`.
const GENUS_TABLE: [i64; 30] = [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 2, 1, 1, 2, 5, 2, 7, 3, 5, 6, 12, 5, 12, 10, 13, 10, 22, 9];

#[test]
fn acceptance_criteria() {
    let ws = Workspace::new(None);
    let mut lines = Vec::new();
    let mp = |s: &CheckSpec| format!("({},{})", s.level, s.p.unwrap());
    let m = |s: &CheckSpec| format!("M={}", s.level);

    let specs = (4..=16).map(|m| CheckSpec::new(CheckKind::Welldefined, m).with_backend(Backend::Presented)).collect();
    lines.push(checks(&ws, specs, "A1", m));

    let divides = [(4, 2), (8, 2), (9, 3)];
    let specs = divides.iter().map(|&(m, p)| CheckSpec::new(CheckKind::Theorem1Divides, m).with_p(p).with_backend(Backend::Both)).collect();
    lines.push(checks(&ws, specs, "A2", mp));

    let coprime = [(4, 3), (5, 2), (7, 2)];
    let specs = coprime.iter().map(|&(m, p)| CheckSpec::new(CheckKind::Theorem1Coprime, m).with_p(p).with_backend(Backend::Both)).collect();
    lines.push(checks(&ws, specs, "A3", mp));

    let specs = [11, 14, 15].iter().map(|&m| CheckSpec::new(CheckKind::Atkin, m).with_backend(Backend::Both)).collect();
    lines.push(checks(&ws, specs, "A4", m));

    let mut specs = Vec::new();
    for m in [11, 13] {
        for l in [2, 3, 5, 7] {
            specs.push(CheckSpec::new(CheckKind::Eisenstein, m).with_ell(l).with_backend(Backend::Both));
        }
    }
    lines.push(checks(&ws, specs, "A5", |s| format!("({},{})", s.level, s.ell.unwrap())));

    lines.push({
        let base = bracket_symbol(0, 1).unwrap();
        let fixed = [2, 3, 5].iter().all(|&p| base.pushforward_alpha(p) == base);
        let mut pass = fixed;
        let mut detail = format!("alpha_*<0,1> fixed {fixed}");
        for (m, p) in [(4, 2), (4, 3), (6, 5)] {
            let r = lemma41_trials(m, p, 200, 41).unwrap();
            pass &= r.pass;
            detail.push_str(&format!("; ({m},{p}) {}/{}", r.trials - r.failures, r.trials));
        }
        let conv = calibrate_action().unwrap();
        let c = cocycle_check(conv, 100, 7).unwrap();
        pass &= c.pass && conv == ActionConvention::Pullback;
        detail.push_str(&format!("; cocycle {:?} {}/{}", conv, c.pairs - c.failures, c.pairs));
        Line { id: "A6", pass, detail }
    });

    lines.push({
        let mut pass = true;
        let mut parts = Vec::new();
        for m in 5..=16 {
            let r = prop31_check(m).unwrap();
            let oracle = 2 * brute_genus(m) as usize + r.group_order - 1;
            let ok = r.pass && r.module_rank == oracle && r.surjective;
            pass &= ok;
            parts.push(format!("M={m} rank {}={oracle}", r.module_rank));
        }
        Line { id: "A7", pass, detail: parts.join(" ") }
    });

    lines.push({
        let mut pass = true;
        let mut parts = Vec::new();
        for p in [2, 3] {
            let (rank, _) = surjectivity_rank(&ws, 11, p).unwrap();
            let oracle = 2 * GENUS_TABLE[10] as usize;
            pass &= rank == oracle;
            parts.push(format!("(11,{p}) rank mod p {rank}/{oracle}"));
        }
        Line { id: "A8", pass, detail: parts.join("; ") }
    });

    let specs = [5, 7, 11].iter().map(|&m| CheckSpec::new(CheckKind::SanityIntegrality, m)).collect();
    lines.push(checks(&ws, specs, "A9", m));

    lines.push({
        let mut pass = true;
        let mut bad = Vec::new();
        for n in 4..=30u64 {
            let pres = HomologyPresentation::new(n).unwrap();
            let g = GENUS_TABLE[n as usize - 1];
            let ok = brute_genus(n) == g
                && pres.absolute().unwrap().dim() as i64 == 2 * g
                && pres.cusps().len() == brute_cusps(n);
            if !ok {
                bad.push(n);
            }
            pass &= ok;
        }
        Line { id: "A10", pass, detail: format!("M=4..30 mismatches {bad:?}") }
    });

    report(&lines);
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
