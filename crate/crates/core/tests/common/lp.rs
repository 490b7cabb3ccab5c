//! Minimal reader for the LP files written by `export_bilp`, enough to check
//! structure and evaluate assignments.

use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, Default)]
pub struct LpModel {
    pub sections: Vec<String>,
    pub objective: Vec<(i64, String)>,
    pub constraints: Vec<Constraint>,
    pub binaries: BTreeSet<String>,
}

fn parse_terms(expr: &str) -> Vec<(i64, String)> {
    let mut terms = Vec::new();
    for chunk in expr.split('+') {
        let toks: Vec<&str> = chunk.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [var] => terms.push((1, var.to_string())),
            [coef, var] => terms.push((coef.parse().expect("coefficient"), var.to_string())),
            other => panic!("unexpected term {other:?}"),
        }
    }
    terms
}

fn finish(statement: &str, model: &mut LpModel, section: &str) {
    if statement.trim().is_empty() {
        return;
    }
    let (name, body) = statement.split_once(':').expect("named statement");
    match section {
        "Maximize" => model.objective = parse_terms(body),
        "Subject To" => {
            let (expr, sense, rhs) = if let Some((e, r)) = body.split_once("<=") {
                (e, Sense::Le, r)
            } else {
                let (e, r) = body.split_once('=').expect("relation");
                (e, Sense::Eq, r)
            };
            model.constraints.push(Constraint {
                name: name.trim().to_string(),
                terms: parse_terms(expr),
                sense,
                rhs: rhs.trim().parse().expect("rhs"),
            });
        }
        _ => unreachable!(),
    }
}

pub fn parse(text: &str) -> LpModel {
    let mut model = LpModel::default();
    let mut section = String::new();
    let mut statement = String::new();
    for line in text.lines() {
        if line.starts_with('\\') {
            continue;
        }
        let trimmed = line.trim();
        if matches!(trimmed, "Maximize" | "Subject To" | "Binary" | "End") {
            if section == "Maximize" || section == "Subject To" {
                finish(&statement, &mut model, &section);
            }
            statement.clear();
            section = trimmed.to_string();
            model.sections.push(section.clone());
            continue;
        }
        match section.as_str() {
            "Maximize" | "Subject To" => {
                if trimmed.contains(':') {
                    finish(&statement, &mut model, &section);
                    statement = trimmed.to_string();
                } else {
                    statement.push(' ');
                    statement.push_str(trimmed);
                }
            }
            "Binary" => model.binaries.extend(trimmed.split_whitespace().map(str::to_string)),
            _ => panic!("content outside a section: {line}"),
        }
    }
    model
}

impl LpModel {
    pub fn objective_value(&self, values: &HashMap<String, i64>) -> i64 {
        self.objective.iter().map(|(c, v)| c * values.get(v).copied().unwrap_or(0)).sum()
    }

    pub fn feasible(&self, values: &HashMap<String, i64>) -> bool {
        self.constraints.iter().all(|c| {
            let lhs: i64 = c.terms.iter().map(|(k, v)| k * values.get(v).copied().unwrap_or(0)).sum();
            match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Eq => lhs == c.rhs,
            }
        })
    }

    /// Constraint counts by name prefix (`in`, `out`, `ord`, `tri`, `link`).
    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.constraints {
            let family = c.name.split('_').next().unwrap().to_string();
            *counts.entry(family).or_insert(0) += 1;
        }
        counts
    }

    /// Exhaustive maximum over all binary assignments; only for tiny models.
    pub fn brute_force_max(&self) -> Option<i64> {
        let vars: Vec<&String> = self.binaries.iter().collect();
        assert!(vars.len() <= 20, "too many variables to enumerate");
        let mut best = None;
        for bits in 0u32..(1 << vars.len()) {
            let values: HashMap<String, i64> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| ((*v).clone(), ((bits >> i) & 1) as i64))
                .collect();
            if self.feasible(&values) {
                let obj = self.objective_value(&values);
                if best.is_none_or(|b| obj > b) {
                    best = Some(obj);
                }
            }
        }
        best
    }
}

/// Variable assignment induced by a layout given as labels in memory order.
pub fn assignment_for(order: &[u32]) -> HashMap<String, i64> {
    let n = order.len();
    let mut pos = vec![0; n + 1];
    for (p, &l) in order.iter().enumerate() {
        pos[l as usize] = p;
    }
    let mut values = HashMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                values.insert(format!("x_{i}_{j}"), (pos[j] == pos[i] + 1) as i64);
                values.insert(format!("y_{i}_{j}"), (pos[i] < pos[j]) as i64);
            }
        }
    }
    values
}

/// Solves the LP file with HiGHS through Python when `highspy` is installed.
pub fn solve_with_highs(lp_text: &str) -> Option<f64> {
    let dir = std::env::temp_dir().join(format!("miov-lp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).ok()?;
    let path = dir.join(format!("model-{:x}.lp", fxhash(lp_text)));
    std::fs::write(&path, lp_text).ok()?;
    let script = "import sys, highspy\n\
                  h = highspy.Highs()\n\
                  h.setOptionValue('output_flag', False)\n\
                  h.readModel(sys.argv[1])\n\
                  h.run()\n\
                  print(h.getInfo().objective_function_value)\n";
    let out = std::process::Command::new("python3").arg("-c").arg(script).arg(&path).output().ok()?;
    let _ = std::fs::remove_file(&path);
    if !out.status.success() {
        return None;
    }
    String::from_utf8(out.stdout).ok()?.trim().parse().ok()
}

pub fn highs_available() -> bool {
    std::process::Command::new("python3")
        .args(["-c", "import highspy"])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}
