//! Source of truth for the shipped catalog file.

use indexmap::IndexMap;

use super::schema::{CatalogDoc, CritDef, GroupDef, LevelDef, SubgroupDef};
use crate::group::{ChainStep, Constraint, CritCandidate, LinearFunctional, PiSpec, Pos, WitnessSpec};

/// Entry position with one-based row/column labels, as in `a_{ij}`.
fn p(f: usize, i: usize, j: usize) -> Pos {
    Pos::new(f, i - 1, j - 1)
}

fn lf(pos: Pos) -> LinearFunctional {
    LinearFunctional::entry(pos)
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

struct Draft {
    def: GroupDef,
}

impl Draft {
    fn new(name: &str, dims: &[usize]) -> Self {
        Draft {
            def: GroupDef {
                name: name.into(),
                dims: dims.to_vec(),
                abelian: false,
                ambient_zero: Vec::new(),
                elements: IndexMap::new(),
                alphabet: Vec::new(),
                levels: Vec::new(),
                terminal_zero: Vec::new(),
                subgroups: Vec::new(),
                central: Vec::new(),
                witnesses: Vec::new(),
                crit: CritDef {
                    candidates: Vec::new(),
                    rationale: String::new(),
                },
            },
        }
    }

    /// Named element with the listed entries set (all other upper entries zero).
    fn element(&mut self, name: &str, entries: &[(Pos, i64)]) -> &mut Self {
        let mut mats: Vec<Vec<Vec<i64>>> = self
            .def
            .dims
            .iter()
            .map(|&d| (0..d).map(|r| (0..d).map(|c| i64::from(r == c)).collect()).collect())
            .collect();
        for &(pos, v) in entries {
            mats[pos.factor][pos.row][pos.col] = v;
        }
        self.def.elements.insert(name.into(), mats);
        self
    }

    /// Alphabet `e, x_1, .., x_k, x_1^-1, .., x_k^-1`.
    fn alphabet(&mut self, gens: &[&str]) -> &mut Self {
        let mut a = vec!["e".to_string()];
        a.extend(gens.iter().map(|s| s.to_string()));
        a.extend(gens.iter().map(|s| format!("{s}^-1")));
        self.def.alphabet = a;
        self
    }

    fn level(&mut self, zero: Vec<Pos>, projection: Vec<Pos>, gens: &[&str]) -> &mut Self {
        self.def.levels.push(LevelDef {
            zero,
            rank: projection.len(),
            torsion: 0,
            projection: projection.into_iter().map(lf).collect(),
            generators: names(gens),
        });
        self
    }

    fn all_positions(&self) -> Vec<Pos> {
        let mut out = Vec::new();
        for (f, &d) in self.def.dims.iter().enumerate() {
            for r in 0..d {
                for c in r + 1..d {
                    out.push(Pos::new(f, r, c));
                }
            }
        }
        out
    }

    fn terminal(&mut self) -> &mut Self {
        self.def.terminal_zero = self.all_positions();
        self
    }

    fn subgroup(&mut self, s: SubgroupDef) -> &mut Self {
        self.def.subgroups.push(s);
        self
    }

    fn witness(&mut self, name: &str, central: &str, k: &str, h: &str, mu: Pos, chain: &[(&str, Pos)]) -> &mut Self {
        self.def.witnesses.push(WitnessSpec {
            name: name.into(),
            central: central.into(),
            k: k.into(),
            h: h.into(),
            mu: lf(mu),
            chain: chain
                .iter()
                .map(|&(s, l)| ChainStep {
                    subgroup: s.into(),
                    lambda: lf(l),
                })
                .collect(),
            note: None,
        });
        self
    }

    fn crit(&mut self, candidates: &[(&str, &[&str])], rationale: &str) -> &mut Self {
        self.def.crit = CritDef {
            candidates: candidates
                .iter()
                .map(|(c, ws)| CritCandidate {
                    central: c.to_string(),
                    witnesses: names(ws),
                })
                .collect(),
            rationale: rationale.into(),
        };
        self
    }

    fn whole(&self, gens: &[&str]) -> SubgroupDef {
        let levels = self.def.levels.iter().enumerate().map(|(j, _)| {
            self.def.levels[j..].iter().flat_map(|l| l.generators.clone()).collect()
        });
        SubgroupDef {
            name: "whole".into(),
            constraints: Vec::new(),
            generators: names(gens),
            levels: Some(levels.collect()),
            pi: None,
            canonicalizer: Some(Vec::new()),
            join_center: Some("whole".into()),
        }
    }

    fn trivial(&self) -> SubgroupDef {
        let all: Vec<Pos> = self
            .all_positions()
            .into_iter()
            .filter(|p| !self.def.ambient_zero.contains(p))
            .collect();
        SubgroupDef {
            name: "trivial".into(),
            constraints: all.iter().copied().map(Constraint::Entry).collect(),
            generators: Vec::new(),
            levels: Some(vec![Vec::new(); self.def.levels.len()]),
            pi: None,
            canonicalizer: Some(all.into_iter().map(lf).collect()),
            join_center: None,
        }
    }

    fn finish(&mut self) -> GroupDef {
        self.def.clone()
    }
}

fn sub(name: &str, zero: &[Pos], gens: &[&str], levels: &[&[&str]]) -> SubgroupDef {
    SubgroupDef {
        name: name.into(),
        constraints: zero.iter().copied().map(Constraint::Entry).collect(),
        generators: names(gens),
        levels: Some(levels.iter().map(|l| names(l)).collect()),
        pi: None,
        canonicalizer: None,
        join_center: None,
    }
}

fn with_canon(mut s: SubgroupDef, key: &[Pos]) -> SubgroupDef {
    s.canonicalizer = Some(key.iter().copied().map(lf).collect());
    s
}

fn with_pi(mut s: SubgroupDef, functional: Pos, central: &str) -> SubgroupDef {
    s.pi = Some(PiSpec {
        functional: lf(functional),
        central: central.into(),
        value: 1,
    });
    s
}

fn with_join(mut s: SubgroupDef, join: &str) -> SubgroupDef {
    s.join_center = Some(join.into());
    s
}

fn zd(d: usize) -> GroupDef {
    let letters = ["x", "y", "z", "w"];
    let gens = &letters[..d];
    let mut g = Draft::new(&format!("Z{d}"), &vec![2; d]);
    g.def.abelian = true;
    for (f, n) in gens.iter().enumerate() {
        g.element(n, &[(p(f, 1, 2), 1)]);
    }
    g.alphabet(gens);
    g.level(Vec::new(), (0..d).map(|f| p(f, 1, 2)).collect(), gens);
    g.terminal();
    g.central = names(gens);
    let whole = g.whole(gens);
    let trivial = g.trivial();
    g.subgroup(whole).subgroup(trivial);
    let rest: Vec<&str> = gens[1..].to_vec();
    g.subgroup(sub("H_x", &[p(0, 1, 2)], &rest, &[&rest]));
    g.witness("G", "x", "whole", "H_x", p(0, 1, 2), &[]);
    g.crit(
        &[("x", &["G"])],
        "abelian: K = G is a stabilizer subgroup with trivial quotient, so no finite bound arises",
    );
    g.finish()
}

impl Draft {
    fn set_central(&mut self, c: &[&str]) -> &mut Self {
        self.def.central = names(c);
        self
    }
}

impl std::ops::DerefMut for Draft {
    fn deref_mut(&mut self) -> &mut GroupDef {
        &mut self.def
    }
}

impl std::ops::Deref for Draft {
    type Target = GroupDef;
    fn deref(&self) -> &GroupDef {
        &self.def
    }
}

fn n3() -> GroupDef {
    let mut g = Draft::new("N3", &[3]);
    g.element("a", &[(p(0, 1, 2), 1)])
        .element("b", &[(p(0, 2, 3), 1)])
        .element("c", &[(p(0, 1, 3), 1)])
        .alphabet(&["a", "b"])
        .level(Vec::new(), vec![p(0, 1, 2), p(0, 2, 3)], &["a", "b"])
        .level(vec![p(0, 1, 2), p(0, 2, 3)], vec![p(0, 1, 3)], &["c"])
        .terminal()
        .set_central(&["c"]);
    let (whole, trivial) = (g.whole(&["a", "b", "c"]), g.trivial());
    let zc = with_pi(
        with_canon(sub("Zcenter", &[p(0, 1, 2), p(0, 2, 3)], &["c"], &[&[], &["c"]]), &[p(0, 1, 2), p(0, 2, 3)]),
        p(0, 1, 3),
        "c",
    );
    let kac = with_join(
        with_pi(
            with_canon(sub("K_ac", &[p(0, 2, 3)], &["a", "c"], &[&["a", "c"], &["c"]]), &[p(0, 2, 3)]),
            p(0, 1, 3),
            "c",
        ),
        "K_ac",
    );
    g.subgroup(whole)
        .subgroup(trivial)
        .subgroup(with_join(zc, "Zcenter"))
        .subgroup(kac)
        .subgroup(with_join(sub("H_a", &[p(0, 2, 3), p(0, 1, 3)], &["a"], &[&["a"], &[]]), "K_ac"));
    g.witness("K_ac", "c", "K_ac", "H_a", p(0, 1, 3), &[("K_ac", p(0, 2, 3))])
        .witness(
            "Zc",
            "c",
            "Zcenter",
            "trivial",
            p(0, 1, 3),
            &[("K_ac", p(0, 2, 3)), ("Zcenter", p(0, 1, 2))],
        )
        .crit(
            &[("c", &["K_ac", "Zc"])],
            "the center is cyclic, generated by c; every nontrivial central element is a power of c and shares its stabilizer subgroups",
        );
    g.finish()
}

fn n4() -> GroupDef {
    let mut g = Draft::new("N4", &[4]);
    g.element("a", &[(p(0, 1, 2), 1)])
        .element("b", &[(p(0, 2, 3), 1)])
        .element("d", &[(p(0, 3, 4), 1)])
        .element("u", &[(p(0, 1, 3), 1)])
        .element("w", &[(p(0, 2, 4), 1)])
        .element("c", &[(p(0, 1, 4), 1)])
        .alphabet(&["a", "b", "d"])
        .level(Vec::new(), vec![p(0, 1, 2), p(0, 2, 3), p(0, 3, 4)], &["a", "b", "d"])
        .level(vec![p(0, 1, 2), p(0, 2, 3), p(0, 3, 4)], vec![p(0, 1, 3), p(0, 2, 4)], &["u", "w"])
        .level(
            vec![p(0, 1, 2), p(0, 2, 3), p(0, 3, 4), p(0, 1, 3), p(0, 2, 4)],
            vec![p(0, 1, 4)],
            &["c"],
        )
        .terminal()
        .set_central(&["c"]);
    let (whole, trivial) = (g.whole(&["a", "b", "d", "u", "w", "c"]), g.trivial());
    let e12 = p(0, 1, 2);
    let e23 = p(0, 2, 3);
    let e34 = p(0, 3, 4);
    let e13 = p(0, 1, 3);
    let e24 = p(0, 2, 4);
    let e14 = p(0, 1, 4);
    g.subgroup(whole).subgroup(trivial);
    g.subgroup(sub(
        "Gp",
        &[e12],
        &["b", "d", "u", "w", "c"],
        &[&["b", "d", "u", "w", "c"], &["u", "w", "c"], &["c"]],
    ))
    .subgroup(sub("S1", &[e12, e23], &["d", "u", "w", "c"], &[&["d", "u", "w", "c"], &["u", "w", "c"], &["c"]]))
    .subgroup(sub("G2", &[e12, e23, e34], &["u", "w", "c"], &[&["u", "w", "c"], &["u", "w", "c"], &["c"]]))
    .subgroup(sub("S3", &[e12, e23, e34, e13], &["w", "c"], &[&["w", "c"], &["w", "c"], &["c"]]))
    .subgroup(with_join(
        with_pi(
            with_canon(
                sub("Zcenter", &[e12, e23, e34, e13, e24], &["c"], &[&["c"], &["c"], &["c"]]),
                &[e12, e23, e34, e13, e24],
            ),
            e14,
            "c",
        ),
        "Zcenter",
    ))
    .subgroup(with_pi(
        with_canon(
            sub("K_ex74", &[e12, e34], &["b", "u", "w", "c"], &[&["b", "u", "w", "c"], &["u", "w", "c"], &["c"]]),
            &[e12, e34],
        ),
        e14,
        "c",
    ))
    .subgroup(sub("H74", &[e12, e34, e14], &["b", "u", "w"], &[&["b", "u", "w"], &["u", "w"], &[]]));
    g.witness("K_ex74", "c", "K_ex74", "H74", e14, &[("Gp", e12), ("K_ex74", e34)])
        .witness(
            "Zc",
            "c",
            "Zcenter",
            "trivial",
            e14,
            &[("Gp", e12), ("S1", e23), ("G2", e34), ("S3", e13), ("Zcenter", e24)],
        )
        .crit(
            &[("c", &["K_ex74", "Zc"])],
            "the center is cyclic, generated by the top-corner element c",
        );
    g.finish()
}

/// The index-free subgroup `{a_12 = 0}` of N4 as a group in its own right.
fn n4p() -> GroupDef {
    let mut g = Draft::new("N4p", &[4]);
    let e12 = p(0, 1, 2);
    let e23 = p(0, 2, 3);
    let e34 = p(0, 3, 4);
    let e13 = p(0, 1, 3);
    let e24 = p(0, 2, 4);
    let e14 = p(0, 1, 4);
    g.ambient_zero = vec![e12];
    g.element("b", &[(e23, 1)])
        .element("d", &[(e34, 1)])
        .element("u", &[(e13, 1)])
        .element("w", &[(e24, 1)])
        .element("c", &[(e14, 1)])
        .alphabet(&["b", "d", "u"])
        .level(vec![e12], vec![e23, e34, e13], &["b", "d", "u"])
        .level(vec![e12, e23, e34, e13], vec![e24, e14], &["w", "c"])
        .terminal()
        .set_central(&["w", "c"]);
    let (whole, trivial) = (g.whole(&["b", "d", "u", "w", "c"]), g.trivial());
    g.subgroup(whole).subgroup(trivial);
    g.subgroup(with_join(
        with_canon(
            sub("Zcenter", &[e23, e34, e13], &["w", "c"], &[&["w", "c"], &["w", "c"]]),
            &[e23, e34, e13],
        ),
        "Zcenter",
    ))
    .subgroup(with_pi(
        with_canon(sub("K_ex74", &[e34], &["b", "u", "w", "c"], &[&["b", "u", "w", "c"], &["w", "c"]]), &[e34]),
        e14,
        "c",
    ))
    .subgroup(sub("H74", &[e34, e14], &["b", "u", "w"], &[&["b", "u", "w"], &["w"]]));
    g.witness("K_ex74", "c", "K_ex74", "H74", e14, &[("K_ex74", e34)]).crit(
        &[("c", &["K_ex74"])],
        "c is the element whose support stabilizer is exhibited; the center also contains w, not declared here",
    );
    g.finish()
}

/// Five-dimensional Heisenberg group inside 4x4 unitriangular matrices (a_23 = 0).
fn h5() -> GroupDef {
    let mut g = Draft::new("H5", &[4]);
    let e12 = p(0, 1, 2);
    let e13 = p(0, 1, 3);
    let e24 = p(0, 2, 4);
    let e34 = p(0, 3, 4);
    let e14 = p(0, 1, 4);
    g.ambient_zero = vec![p(0, 2, 3)];
    g.element("x1", &[(e12, 1)])
        .element("x2", &[(e13, 1)])
        .element("y1", &[(e24, 1)])
        .element("y2", &[(e34, 1)])
        .element("z", &[(e14, 1)])
        .alphabet(&["x1", "x2", "y1", "y2"])
        .level(vec![p(0, 2, 3)], vec![e12, e13, e24, e34], &["x1", "x2", "y1", "y2"])
        .level(vec![p(0, 2, 3), e12, e13, e24, e34], vec![e14], &["z"])
        .terminal()
        .set_central(&["z"]);
    let (whole, trivial) = (g.whole(&["x1", "x2", "y1", "y2", "z"]), g.trivial());
    g.subgroup(whole).subgroup(trivial);
    g.subgroup(with_join(
        with_pi(
            with_canon(sub("Zcenter", &[e12, e13, e24, e34], &["z"], &[&["z"], &["z"]]), &[e12, e13, e24, e34]),
            e14,
            "z",
        ),
        "Zcenter",
    ))
    .subgroup(sub("S_y1", &[e24], &["x1", "x2", "y2", "z"], &[&["x1", "x2", "y2", "z"], &["z"]]))
    .subgroup(with_join(
        with_pi(
            with_canon(sub("Kx", &[e24, e34], &["x1", "x2", "z"], &[&["x1", "x2", "z"], &["z"]]), &[e24, e34]),
            e14,
            "z",
        ),
        "Kx",
    ))
    .subgroup(sub("S_x1", &[e24, e34, e12], &["x2", "z"], &[&["x2", "z"], &["z"]]))
    .subgroup(with_join(sub("H_x", &[e24, e34, e14], &["x1", "x2"], &[&["x1", "x2"], &[]]), "Kx"));
    g.witness("Kx", "z", "Kx", "H_x", e14, &[("S_y1", e24), ("Kx", e34)])
        .witness(
            "Zc",
            "z",
            "Zcenter",
            "trivial",
            e14,
            &[("S_y1", e24), ("Kx", e34), ("S_x1", e12), ("Zcenter", e13)],
        )
        .crit(&[("z", &["Kx", "Zc"])], "the center is cyclic, generated by z");
    g.finish()
}

fn n3xn3() -> GroupDef {
    let mut g = Draft::new("N3xN3", &[3, 3]);
    let a = |f| p(f, 1, 2);
    let b = |f| p(f, 2, 3);
    let c = |f| p(f, 1, 3);
    g.element("a1", &[(a(0), 1)])
        .element("b1", &[(b(0), 1)])
        .element("c1", &[(c(0), 1)])
        .element("a2", &[(a(1), 1)])
        .element("b2", &[(b(1), 1)])
        .element("c2", &[(c(1), 1)])
        .element("c1c2", &[(c(0), 1), (c(1), 1)])
        .element("a1a2", &[(a(0), 1), (a(1), 1)])
        .alphabet(&["a1", "b1", "a2", "b2"])
        .level(Vec::new(), vec![a(0), b(0), a(1), b(1)], &["a1", "b1", "a2", "b2"])
        .level(vec![a(0), b(0), a(1), b(1)], vec![c(0), c(1)], &["c1", "c2"])
        .terminal()
        .set_central(&["c1", "c2", "c1c2"]);
    let (whole, trivial) = (g.whole(&["a1", "b1", "c1", "a2", "b2", "c2"]), g.trivial());
    g.subgroup(whole).subgroup(trivial);
    g.subgroup(with_join(
        with_canon(
            sub("Zcenter", &[a(0), b(0), a(1), b(1)], &["c1", "c2"], &[&["c1", "c2"], &["c1", "c2"]]),
            &[a(0), b(0), a(1), b(1)],
        ),
        "Zcenter",
    ))
    .subgroup(with_pi(
        with_canon(
            sub(
                "K1",
                &[b(0)],
                &["a1", "c1", "a2", "b2", "c2"],
                &[&["a1", "c1", "a2", "b2", "c2"], &["c1", "c2"]],
            ),
            &[b(0)],
        ),
        c(0),
        "c1",
    ))
    .subgroup(sub("H1", &[b(0), c(0)], &["a1", "a2", "b2", "c2"], &[&["a1", "a2", "b2", "c2"], &["c2"]]))
    .subgroup(with_pi(
        with_canon(
            sub(
                "K2",
                &[b(1)],
                &["a1", "b1", "c1", "a2", "c2"],
                &[&["a1", "b1", "c1", "a2", "c2"], &["c1", "c2"]],
            ),
            &[b(1)],
        ),
        c(1),
        "c2",
    ))
    .subgroup(sub("H2", &[b(1), c(1)], &["a1", "b1", "c1", "a2"], &[&["a1", "b1", "c1", "a2"], &["c1"]]))
    .subgroup(with_join(
        sub("A_ac", &[b(0), b(1)], &["a1", "c1", "a2", "c2"], &[&["a1", "c1", "a2", "c2"], &["c1", "c2"]]),
        "A_ac",
    ))
    .subgroup(with_join(
        sub("A_a", &[b(0), b(1), c(0), c(1)], &["a1", "a2"], &[&["a1", "a2"], &[]]),
        "A_ac",
    ))
    .subgroup(with_join(
        sub("A_ab", &[b(0), a(1)], &["a1", "b2", "c1", "c2"], &[&["a1", "b2", "c1", "c2"], &["c1", "c2"]]),
        "A_ab",
    ));
    let mut diag = sub("A_diag", &[b(0), b(1)], &["a1a2", "c1", "c2"], &[&["a1a2", "c1", "c2"], &["c1", "c2"]]);
    diag.constraints
        .push(Constraint::Functional(LinearFunctional::from_terms([(a(0), 1), (a(1), -1)])));
    g.subgroup(with_join(diag, "A_diag"));
    g.witness("K1", "c1", "K1", "H1", c(0), &[("K1", b(0))])
        .witness("K2", "c2", "K2", "H2", c(1), &[("K2", b(1))])
        .witness("K1_c1c2", "c1c2", "K1", "H1", c(0), &[("K1", b(0))])
        .crit(
            &[("c1", &["K1"]), ("c2", &["K2"]), ("c1c2", &["K1_c1c2"])],
            "representatives of the center Z^2 up to the coordinate swap: the two axes and the diagonal",
        );
    g.finish()
}

pub fn build_catalog() -> CatalogDoc {
    let mut groups: Vec<GroupDef> = (1..=4).map(zd).collect();
    groups.extend([n3(), n4(), n4p(), h5(), n3xn3()]);
    CatalogDoc { version: 1, groups }
}
