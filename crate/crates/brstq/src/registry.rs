//! Built-in scenarios.

use crate::config::{Clifford, LieConfig, PoissonEntry, ScenarioConfig, StructureEntry, WeightEntry};

const ORDER: usize = 4;
const DEGREE: u32 = 6;

fn entry(left: impl Into<String>, right: impl Into<String>, value: &str) -> PoissonEntry {
    PoissonEntry { left: left.into(), right: right.into(), value: value.into() }
}

fn ints(row: &[i64]) -> Vec<WeightEntry> {
    row.iter().map(|&w| WeightEntry::Int(w)).collect()
}

fn base(name: &str, description: &str, variables: Vec<String>, moment: Vec<String>, dim: usize) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        description: description.into(),
        variables,
        weights: Vec::new(),
        parameters: Default::default(),
        negative_parameters: Vec::new(),
        order: ORDER,
        degree: DEGREE,
        moment,
        justification: String::new(),
        generators: None,
        generator_degree: 4,
        clifford: Clifford::Standard,
        reduction: true,
        stages: None,
        probes: 50,
        seed: 1,
        poisson: Vec::new(),
        lie: LieConfig { dim, structure: Vec::new() },
    }
}

fn c4_variables() -> Vec<String> {
    ["z1", "z2", "z3", "z4", "zb1", "zb2", "zb3", "zb4"].map(String::from).to_vec()
}

fn c4_poisson() -> Vec<PoissonEntry> {
    (1..=4).map(|k| entry(format!("z{k}"), format!("zb{k}"), "-2*I")).collect()
}

/// Zero total angular momentum of `m` planar particles, in the coordinates
/// `a_k = q¹_k + i q²_k`, `b_k = p₁ᵏ + i p₂ᵏ` and their conjugates `ab_k`,
/// `bb_k`, with `{a_k, bb_k} = {ab_k, b_k} = 2`.
pub fn angular_momentum(m: usize) -> ScenarioConfig {
    let mut vars = Vec::new();
    for prefix in ["a", "b", "ab", "bb"] {
        for k in 1..=m {
            vars.push(format!("{prefix}{k}"));
        }
    }
    let terms: Vec<String> = (1..=m).map(|k| format!("a{k}*bb{k} - ab{k}*b{k}")).collect();
    let moment = format!("I/2*({})", terms.join(" + "));
    let mut c = base(
        &format!("angular-momentum-m{m}"),
        &format!("zero total angular momentum of {m} particles in the plane"),
        vars,
        vec![moment],
        1,
    );
    let row: Vec<i64> = (0..4 * m).map(|i| if i < 2 * m { 1 } else { -1 }).collect();
    c.weights = vec![ints(&row)];
    c.poisson = (1..=m).flat_map(|k| [entry(format!("a{k}"), format!("bb{k}"), "2"), entry(format!("ab{k}"), format!("b{k}"), "2")]).collect();
    c.justification = "the single quadratic generator is a regular element, so the Koszul complex is acyclic".into();
    c
}

pub fn s1_c4() -> ScenarioConfig {
    let mut c = base(
        "s1-c4",
        "circle acting on C^4 with weights (1, 1, -1, -1)",
        c4_variables(),
        vec!["1/2*(z3*zb3 + z4*zb4 - z1*zb1 - z2*zb2)".into()],
        1,
    );
    c.weights = vec![ints(&[1, 1, -1, -1, -1, -1, 1, 1])];
    c.poisson = c4_poisson();
    c.justification = "indefinite quadratic form in four complex variables: a single irreducible generator".into();
    c
}

pub fn t2_c4() -> ScenarioConfig {
    let mut c = base(
        "t2-c4",
        "two-torus acting on C^4, alpha = -1, beta = 1",
        c4_variables(),
        vec!["1/2*(-alpha*z1*zb1 - z3*zb3)".into(), "1/2*(-beta*z1*zb1 + z2*zb2 - z4*zb4)".into()],
        2,
    );
    c.parameters = [("alpha".to_string(), -1), ("beta".to_string(), 1)].into();
    c.negative_parameters = vec!["alpha".into()];
    let e = |s: &str| WeightEntry::Expr(s.into());
    let i = WeightEntry::Int;
    c.weights = vec![
        vec![e("alpha"), i(0), i(1), i(0), e("-alpha"), i(0), i(-1), i(0)],
        vec![e("beta"), i(-1), i(0), i(1), e("-beta"), i(1), i(0), i(-1)],
    ];
    c.poisson = c4_poisson();
    c.justification = "nonpositivity for alpha < 0".into();
    // Cubic generators: triple products reach degree 9.
    c.degree = 9;
    c
}

/// Pairs of symmetric `n×n` matrices with the trace pairing and
/// `J(X) = −tr(X[Q, P])` on the basis `E_ij − E_ji`.
pub fn commuting(n: usize) -> ScenarioConfig {
    let mut vars = Vec::new();
    let mut poisson = Vec::new();
    for i in 1..=n {
        for k in i..=n {
            vars.push(format!("q{i}{k}"));
            poisson.push(entry(format!("q{i}{k}"), format!("p{i}{k}"), if i == k { "1" } else { "1/2" }));
        }
    }
    for i in 1..=n {
        for k in i..=n {
            vars.push(format!("p{i}{k}"));
        }
    }
    let sym = |m: char, i: usize, k: usize| format!("{m}{}{}", i.min(k), i.max(k));
    // C_ik = Σ_m Q_im P_mk − P_im Q_mk.
    let c_entry = |i: usize, k: usize| -> Vec<String> {
        (1..=n)
            .flat_map(|m| [format!("{}*{}", sym('q', i, m), sym('p', m, k)), format!("-{}*{}", sym('p', i, m), sym('q', m, k))])
            .collect()
    };
    let basis: Vec<(usize, usize)> =
        if n == 3 { vec![(2, 3), (3, 1), (1, 2)] } else { (1..=n).flat_map(|i| (i + 1..=n).map(move |k| (i, k))).collect() };
    let moment = basis
        .iter()
        .map(|&(i, k)| {
            let plus = c_entry(i, k).join(" + ").replace("+ -", "- ");
            let minus = c_entry(k, i).join(" + ").replace("+ -", "- ");
            format!("({plus}) - ({minus})")
        })
        .collect();
    let mut c = base(&format!("commuting-n{n}"), &format!("commuting variety of symmetric {n}x{n} matrices"), vars, moment, basis.len());
    c.poisson = poisson;
    c.lie.structure = so_structure(&basis);
    c.reduction = false;
    c.justification = "the commuting variety of symmetric pairs, identified with (R^n x R^n)/S_n".into();
    c
}

/// `f_ab^c` for the basis `X_ik = E_ik − E_ki` with bracket `−[X, Y]`.
fn so_structure(basis: &[(usize, usize)]) -> Vec<StructureEntry> {
    let n = basis.iter().map(|&(i, k)| i.max(k)).max().unwrap_or(0);
    let matrix = |&(i, k): &(usize, usize)| {
        let mut m = vec![vec![0i64; n + 1]; n + 1];
        m[i][k] = 1;
        m[k][i] = -1;
        m
    };
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
        let mut out = vec![vec![0i64; n + 1]; n + 1];
        for i in 1..=n {
            for k in 1..=n {
                out[i][k] = (1..=n).map(|m| a[i][m] * b[m][k]).sum();
            }
        }
        out
    };
    let mut out = Vec::new();
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate().skip(a + 1) {
            let (mx, my) = (matrix(x), matrix(y));
            let (xy, yx) = (mul(&mx, &my), mul(&my, &mx));
            for (c, &(i, k)) in basis.iter().enumerate() {
                // Coefficient of X_ik in −(XY − YX) is its (i, k) entry.
                let f = -(xy[i][k] - yx[i][k]);
                if f != 0 {
                    out.push(StructureEntry { a: a + 1, b: b + 1, c: c + 1, value: f.to_string() });
                }
            }
        }
    }
    out
}

/// `J = (q, q)` on the plane: not a complete intersection.
pub fn negative_qq() -> ScenarioConfig {
    let mut c = base(
        "negative-control-qq",
        "doubled linear constraint (q, q); the Koszul complex has first homology",
        vec!["q".into(), "p".into()],
        vec!["q".into(), "q".into()],
        2,
    );
    c.poisson = vec![entry("q", "p", "1")];
    c.reduction = false;
    c
}

/// The commuting variety for `n = 3` with the Koszul sign dropped from the
/// Clifford product.
pub fn negative_broken_sign() -> ScenarioConfig {
    let mut c = commuting(3);
    c.name = "negative-control-broken-sign".into();
    c.description = "commuting variety n = 3 with a sign-broken Clifford product".into();
    c.clifford = Clifford::BrokenSign;
    c
}

/// The circle moment map on `C^4` plus a cubic term, without weights.
pub fn negative_cubic() -> ScenarioConfig {
    let mut c = base(
        "negative-control-cubic",
        "circle moment map on C^4 perturbed by a cubic term; not strongly invariant",
        c4_variables(),
        vec!["1/2*(z3*zb3 + z4*zb4 - z1*zb1 - z2*zb2) + z1*zb1*z3 + z1*zb1*zb3".into()],
        1,
    );
    c.poisson = c4_poisson();
    c.reduction = false;
    c
}

/// Registry entries in listing order.
pub fn builtin() -> Vec<ScenarioConfig> {
    vec![
        angular_momentum(2),
        s1_c4(),
        t2_c4(),
        commuting(2),
        commuting(3),
        negative_qq(),
        negative_broken_sign(),
        negative_cubic(),
    ]
}

/// Looks up a registry name; `angular-momentum-m<k>` and `commuting-n<k>`
/// accept any size.
pub fn lookup(name: &str) -> Option<ScenarioConfig> {
    if let Some(c) = builtin().into_iter().find(|c| c.name == name) {
        return Some(c);
    }
    let size = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match (size("angular-momentum-m"), size("commuting-n")) {
        (Some(m), _) if m >= 1 => Some(angular_momentum(m)),
        (_, Some(n)) if n >= 2 => Some(commuting(n)),
        _ => None,
    }
}
