//! Line-oriented model files.
//!
//! One declaration per line; `#` starts a comment (outside quotes). Names
//! must be declared before use and are unique within their kind: species,
//! entities (`micro`, `macro`, `qset`, `weakpair`, `singleton`, `union`),
//! relations, regions, spaces (`eprb`, `space`) and formulas.
//!
//! ```text
//! species ID ["description"]
//! micro NAME SPECIES
//! macro NAME LABEL                  # LABEL is a word or a "quoted string"
//! qset NAME = { a, b, ... }
//! weakpair NAME = [a, b]
//! singleton NAME = [a]
//! union NAME = a + b
//! relation NAME : SOURCE -> TARGET = { (u, v), ... }
//! qfunction NAME : SOURCE -> TARGET = { (u, v), ... }   # must be a quasi-function
//! region NAME dim N
//! ball REGION x1,...,xn RADIUS
//! point REGION x1,...,xn
//! sample REGION COUNT [seed S]
//! eprb NAME region REGION c REAL species SPECIES [unchecked]
//! space NAME carrier QSET
//! dist SPACE a b REAL
//! formula NAME [expect true|false|ill-formed] : TEXT
//! ```
//!
//! A region is frozen once an `eprb` line uses it. Each EPRB space is built in
//! a fresh universe sharing the model's species table, so that its weak
//! singleton `[x]₂` holds exactly its own two micro-atoms. In a finite
//! `space`, `d(x, x)` defaults to 0 and a missing `d(x, y)` is taken from
//! `d(y, x)`; any other missing entry is an error.

use std::collections::BTreeMap;
use std::fmt;

use crate::eprb::{build_eprb, build_eprb_unchecked, validate_diameter, Ball, EprbSpace, RegionV};
use crate::formula::{check_wff, evaluate, parse, Assignment, Formula, SortContext};
use crate::metric::QuasiMetricSpace;
use crate::relations::{is_quasi_function, is_relation, QRelation};
use crate::universe::{Handle, Species, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelError {
    pub line: usize,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Validation => "error",
        };
        write!(f, "line {}: {kind}: {}", self.line, self.message)
    }
}

impl std::error::Error for ModelError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    True,
    False,
    IllFormed,
}

#[derive(Clone, Debug)]
pub struct FormulaDecl {
    pub name: String,
    pub source: String,
    pub formula: Formula,
    pub expect: Option<Expectation>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct RelationDecl {
    pub relation: QRelation,
    pub claims_quasi_function: bool,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct EprbDecl {
    pub space: EprbSpace,
    pub region: String,
    pub unchecked: bool,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteSpaceDecl {
    pub carrier: Handle,
    entries: Vec<(Handle, Handle, f64, usize)>,
    pub line: usize,
}

#[derive(Clone, Debug)]
struct RegionDecl {
    dimension: usize,
    balls: Vec<Ball>,
    points: Vec<Vec<f64>>,
    pending_samples: Vec<(usize, u64)>,
    frozen: Option<RegionV>,
}

/// Any space an audit can run on.
pub enum SpaceRef<'m> {
    Eprb(&'m EprbDecl),
    Finite(&'m FiniteSpaceDecl),
}

/// A loaded model.
#[derive(Clone, Debug)]
pub struct Model {
    universe: Universe,
    entities: BTreeMap<String, Handle>,
    entity_names: Vec<String>,
    relations: BTreeMap<String, RelationDecl>,
    regions: BTreeMap<String, RegionDecl>,
    region_order: Vec<String>,
    eprb: BTreeMap<String, EprbDecl>,
    spaces: BTreeMap<String, FiniteSpaceDecl>,
    space_order: Vec<String>,
    formulas: Vec<FormulaDecl>,
}

/// Outcome of [`Model::check`]: hard errors and informational notes.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub errors: Vec<ModelError>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Punct(char),
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>, ModelError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, ch)) => s.push(ch),
                    None => return Err(syntax(line, "unterminated string")),
                }
            }
            out.push(Tok::Str(s));
        } else if c == '-' && text[i..].starts_with("->") {
            chars.next();
            chars.next();
            out.push(Tok::Arrow);
        } else if "{}[](),=:+".contains(c) {
            chars.next();
            out.push(Tok::Punct(c));
        } else {
            let numeric = c.is_ascii_digit() || c == '-' || c == '.';
            let mut end = text.len();
            while let Some(&(j, ch)) = chars.peek() {
                let keep = if numeric {
                    ch.is_ascii_alphanumeric() || ch == '.' || ch == '-' || ch == '+'
                } else {
                    (ch.is_alphanumeric() || "_-'.".contains(ch)) && !text[j..].starts_with("->")
                };
                if !keep {
                    end = j;
                    break;
                }
                chars.next();
            }
            out.push(Tok::Word(text[i..end].to_string()));
        }
    }
    Ok(out)
}

fn syntax(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError {
        line,
        kind: ErrorKind::Syntax,
        message: msg.into(),
    }
}

fn invalid(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError {
        line,
        kind: ErrorKind::Validation,
        message: msg.into(),
    }
}

struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err_expected(&self, what: &str) -> ModelError {
        match self.toks.get(self.pos) {
            Some(t) => syntax(self.line, format!("expected {what}, found {t}")),
            None => syntax(self.line, format!("expected {what}, found end of line")),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ModelError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err_expected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ModelError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_expected(&format!("`{kw}`"))),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), ModelError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_expected(&format!("`{c}`")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self, what: &str) -> Result<f64, ModelError> {
        let w = self.word(what)?;
        w.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| syntax(self.line, format!("expected {what}, found `{w}`")))
    }

    fn integer(&mut self, what: &str) -> Result<u64, ModelError> {
        let w = self.word(what)?;
        w.parse::<u64>()
            .map_err(|_| syntax(self.line, format!("expected {what}, found `{w}`")))
    }

    fn coordinates(&mut self) -> Result<Vec<f64>, ModelError> {
        let mut out = vec![self.number("a coordinate")?];
        while self.eat_punct(',') {
            out.push(self.number("a coordinate")?);
        }
        Ok(out)
    }

    fn end(&self) -> Result<(), ModelError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(syntax(self.line, format!("unexpected {t} at end of declaration"))),
        }
    }
}

impl Model {
    pub fn parse(text: &str) -> Result<Model, ModelError> {
        let mut species: Vec<Species> = Vec::new();
        let mut model = Model {
            universe: Universe::new([]).expect("empty species table"),
            entities: BTreeMap::new(),
            entity_names: Vec::new(),
            relations: BTreeMap::new(),
            regions: BTreeMap::new(),
            region_order: Vec::new(),
            eprb: BTreeMap::new(),
            spaces: BTreeMap::new(),
            space_order: Vec::new(),
            formulas: Vec::new(),
        };
        let mut species_frozen = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("formula") {
                if rest.starts_with(char::is_whitespace) {
                    model.formula_line(rest, line)?;
                    continue;
                }
            }
            let toks = tokenize(content, line)?;
            let mut cur = Cursor { toks, pos: 0, line };
            let kw = cur.word("a declaration keyword")?;
            if kw == "species" {
                let id = cur.word("a species id")?;
                let description = match cur.next() {
                    Some(Tok::Str(s)) => s,
                    None => String::new(),
                    Some(t) => return Err(syntax(line, format!("expected a description, found {t}"))),
                };
                cur.end()?;
                if species_frozen {
                    return Err(invalid(
                        line,
                        format!("species `{id}` declared after entities; declare species first"),
                    ));
                }
                if species.iter().any(|s| s.id == id) {
                    return Err(invalid(line, format!("duplicate species `{id}`")));
                }
                species.push(Species::new(id, description));
                continue;
            }
            if !species_frozen {
                species_frozen = true;
                model.universe = Universe::new(species.clone()).expect("ids checked above");
            }
            match kw.as_str() {
                "micro" => {
                    let name = cur.word("an entity name")?;
                    let sp = cur.word("a species id")?;
                    cur.end()?;
                    model.fresh_entity(&name, line)?;
                    let h = model
                        .universe
                        .add_micro_atom(&sp)
                        .map_err(|e| invalid(line, e.to_string()))?;
                    model.name_entity(name, h);
                }
                "macro" => {
                    let name = cur.word("an entity name")?;
                    let label = match cur.next() {
                        Some(Tok::Word(w)) | Some(Tok::Str(w)) => w,
                        _ => return Err(syntax(line, "expected a label")),
                    };
                    cur.end()?;
                    model.fresh_entity(&name, line)?;
                    let h = model
                        .universe
                        .add_macro_atom(&label)
                        .map_err(|e| invalid(line, e.to_string()))?;
                    model.name_entity(name, h);
                }
                "qset" => {
                    let name = cur.word("an entity name")?;
                    cur.punct('=')?;
                    let members = model.name_list(&mut cur, '{', '}')?;
                    cur.end()?;
                    model.fresh_entity(&name, line)?;
                    let h = model.universe.make_qset(members).expect("members resolved");
                    model.name_entity(name, h);
                }
                "weakpair" | "singleton" => {
                    let name = cur.word("an entity name")?;
                    cur.punct('=')?;
                    let args = model.name_list(&mut cur, '[', ']')?;
                    cur.end()?;
                    let (x, y) = match (kw.as_str(), args.as_slice()) {
                        ("weakpair", [x, y]) => (*x, *y),
                        ("singleton", [x]) => (*x, *x),
                        _ => {
                            return Err(syntax(
                                line,
                                format!("`{kw}` takes {} argument(s)", if kw == "weakpair" { 2 } else { 1 }),
                            ))
                        }
                    };
                    model.fresh_entity(&name, line)?;
                    let h = model.universe.weak_pair(x, y).expect("handles resolved");
                    model.name_entity(name, h);
                }
                "union" => {
                    let name = cur.word("an entity name")?;
                    cur.punct('=')?;
                    let a = model.entity_ref(&mut cur)?;
                    cur.punct('+')?;
                    let b = model.entity_ref(&mut cur)?;
                    cur.end()?;
                    model.fresh_entity(&name, line)?;
                    let h = model
                        .universe
                        .qset_union(a, b)
                        .map_err(|e| invalid(line, e.to_string()))?;
                    model.name_entity(name, h);
                }
                "relation" | "qfunction" => model.relation_line(&mut cur, kw == "qfunction")?,
                "region" => {
                    let name = cur.word("a region name")?;
                    cur.keyword("dim")?;
                    let dim = cur.integer("a dimension")? as usize;
                    cur.end()?;
                    if dim == 0 {
                        return Err(invalid(line, "dimension must be at least 1"));
                    }
                    if model.regions.contains_key(&name) {
                        return Err(invalid(line, format!("duplicate region `{name}`")));
                    }
                    model.region_order.push(name.clone());
                    model.regions.insert(
                        name,
                        RegionDecl {
                            dimension: dim,
                            balls: Vec::new(),
                            points: Vec::new(),
                            pending_samples: Vec::new(),
                            frozen: None,
                        },
                    );
                }
                "ball" | "point" | "sample" => {
                    let name = cur.word("a region name")?;
                    let region = model.open_region(&name, line)?;
                    match kw.as_str() {
                        "ball" => {
                            let center = cur.coordinates()?;
                            let radius = cur.number("a radius")?;
                            cur.end()?;
                            if center.len() != region.dimension {
                                return Err(invalid(
                                    line,
                                    format!("ball has dimension {}, region `{name}` has {}", center.len(), region.dimension),
                                ));
                            }
                            region
                                .balls
                                .push(Ball::new(center, radius).map_err(|e| invalid(line, e.to_string()))?);
                        }
                        "point" => {
                            let p = cur.coordinates()?;
                            cur.end()?;
                            if p.len() != region.dimension {
                                return Err(invalid(
                                    line,
                                    format!("point has dimension {}, region `{name}` has {}", p.len(), region.dimension),
                                ));
                            }
                            region.points.push(p);
                        }
                        _ => {
                            let count = cur.integer("a sample count")? as usize;
                            let mut seed = 0;
                            if cur.peek().is_some() {
                                cur.keyword("seed")?;
                                seed = cur.integer("a seed")?;
                            }
                            cur.end()?;
                            region.pending_samples.push((count, seed));
                        }
                    }
                }
                "eprb" => model.eprb_line(&mut cur, &species)?,
                "space" => {
                    let name = cur.word("a space name")?;
                    cur.keyword("carrier")?;
                    let carrier = model.entity_ref(&mut cur)?;
                    cur.end()?;
                    model.fresh_space(&name, line)?;
                    if !model.universe.is_qset(carrier).expect("resolved") {
                        return Err(invalid(line, format!("carrier of `{name}` must be a qset")));
                    }
                    model.space_order.push(name.clone());
                    model.spaces.insert(
                        name,
                        FiniteSpaceDecl {
                            carrier,
                            entries: Vec::new(),
                            line,
                        },
                    );
                }
                "dist" => {
                    let name = cur.word("a space name")?;
                    let a = model.entity_ref(&mut cur)?;
                    let b = model.entity_ref(&mut cur)?;
                    let v = match cur.word("a distance")?.as_str() {
                        "inf" => f64::INFINITY,
                        "nan" => f64::NAN,
                        w => w
                            .parse::<f64>()
                            .map_err(|_| syntax(line, format!("expected a distance, found `{w}`")))?,
                    };
                    cur.end()?;
                    let decl = model
                        .spaces
                        .get(&name)
                        .ok_or_else(|| invalid(line, format!("unknown space `{name}`")))?;
                    for h in [a, b] {
                        if !model.universe.member_of(h, decl.carrier).expect("resolved") {
                            return Err(invalid(
                                line,
                                format!("`{}` is not in the carrier of `{name}`", model.entity_names[h.index()]),
                            ));
                        }
                    }
                    model.spaces.get_mut(&name).expect("checked").entries.push((a, b, v, line));
                }
                other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
            }
        }
        if !species_frozen {
            model.universe = Universe::new(species).expect("ids checked");
        }
        Ok(model)
    }

    fn formula_line(&mut self, rest: &str, line: usize) -> Result<(), ModelError> {
        let (head, source) = rest
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `formula NAME [expect ...] : TEXT`"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let (name, expect) = match head.as_slice() {
            [name] => (*name, None),
            [name, "expect", e] => {
                let e = match *e {
                    "true" => Expectation::True,
                    "false" => Expectation::False,
                    "ill-formed" => Expectation::IllFormed,
                    other => {
                        return Err(syntax(
                            line,
                            format!("expected true, false or ill-formed, found `{other}`"),
                        ))
                    }
                };
                (*name, Some(e))
            }
            _ => return Err(syntax(line, "expected `formula NAME [expect ...] : TEXT`")),
        };
        if self.formulas.iter().any(|f| f.name == name) {
            return Err(invalid(line, format!("duplicate formula `{name}`")));
        }
        let source = source.trim().to_string();
        let formula = parse(&source).map_err(|d| {
            syntax(line, format!("formula `{name}`, column {}: {}", d.column, d.message))
        })?;
        for free in formula.free_names() {
            if !self.entities.contains_key(free) && !self.relations.contains_key(free) {
                return Err(invalid(
                    line,
                    format!("formula `{name}` refers to undeclared name `{free}`"),
                ));
            }
        }
        self.formulas.push(FormulaDecl {
            name: name.to_string(),
            source,
            formula,
            expect,
            line,
        });
        Ok(())
    }

    fn relation_line(&mut self, cur: &mut Cursor, qfunction: bool) -> Result<(), ModelError> {
        let line = cur.line;
        let name = cur.word("a relation name")?;
        cur.punct(':')?;
        let source = self.entity_ref(cur)?;
        if cur.next() != Some(Tok::Arrow) {
            return Err(syntax(line, "expected `->`"));
        }
        let target = self.entity_ref(cur)?;
        cur.punct('=')?;
        cur.punct('{')?;
        let mut pairs = Vec::new();
        if !cur.eat_punct('}') {
            loop {
                cur.punct('(')?;
                let a = self.entity_ref(cur)?;
                cur.punct(',')?;
                let b = self.entity_ref(cur)?;
                cur.punct(')')?;
                pairs.push((a, b));
                if cur.eat_punct('}') {
                    break;
                }
                cur.punct(',')?;
            }
        }
        cur.end()?;
        if self.relations.contains_key(&name) {
            return Err(invalid(line, format!("duplicate relation `{name}`")));
        }
        if self.entities.contains_key(&name) {
            return Err(invalid(line, format!("`{name}` is already an entity name")));
        }
        let relation = QRelation::new(source, target, pairs);
        match is_relation(&self.universe, &relation) {
            Ok(true) => {}
            Ok(false) => {
                return Err(invalid(
                    line,
                    format!("`{name}` is not a relation between its source and target"),
                ))
            }
            Err(e) => return Err(invalid(line, e.to_string())),
        }
        self.relations.insert(
            name,
            RelationDecl {
                relation,
                claims_quasi_function: qfunction,
                line,
            },
        );
        Ok(())
    }

    fn eprb_line(&mut self, cur: &mut Cursor, species: &[Species]) -> Result<(), ModelError> {
        let line = cur.line;
        let name = cur.word("a space name")?;
        cur.keyword("region")?;
        let region_name = cur.word("a region name")?;
        cur.keyword("c")?;
        let c = cur.number("the constant c")?;
        cur.keyword("species")?;
        let sp = cur.word("a species id")?;
        let unchecked = match cur.peek() {
            Some(Tok::Word(w)) if w == "unchecked" => {
                cur.pos += 1;
                true
            }
            _ => false,
        };
        cur.end()?;
        self.fresh_space(&name, line)?;
        let region = self.freeze_region(&region_name, line)?;
        let universe = Universe::new(species.to_vec()).expect("ids checked");
        let built = if unchecked {
            build_eprb_unchecked(universe, region, c, &sp)
        } else {
            build_eprb(universe, region, c, &sp)
        };
        let space = built.map_err(|e| invalid(line, format!("space `{name}`: {e}")))?;
        self.space_order.push(name.clone());
        self.eprb.insert(
            name,
            EprbDecl {
                space,
                region: region_name,
                unchecked,
                line,
            },
        );
        Ok(())
    }

    fn open_region(&mut self, name: &str, line: usize) -> Result<&mut RegionDecl, ModelError> {
        let region = self
            .regions
            .get_mut(name)
            .ok_or_else(|| invalid(line, format!("unknown region `{name}`")))?;
        if region.frozen.is_some() {
            return Err(invalid(line, format!("region `{name}` is already in use by a space")));
        }
        Ok(region)
    }

    fn freeze_region(&mut self, name: &str, line: usize) -> Result<RegionV, ModelError> {
        let region = self
            .regions
            .get_mut(name)
            .ok_or_else(|| invalid(line, format!("unknown region `{name}`")))?;
        if let Some(r) = &region.frozen {
            return Ok(r.clone());
        }
        let mut points = region.points.clone();
        for &(count, seed) in &region.pending_samples {
            let sampled = RegionV::sampled(region.dimension, region.balls.clone(), count, seed)
                .map_err(|e| invalid(line, format!("region `{name}`: {e}")))?;
            points.extend(sampled.sample_points().iter().cloned());
        }
        let r = RegionV::new(region.dimension, region.balls.clone(), points)
            .map_err(|e| invalid(line, format!("region `{name}`: {e}")))?;
        region.frozen = Some(r.clone());
        Ok(r)
    }

    fn fresh_entity(&self, name: &str, line: usize) -> Result<(), ModelError> {
        if self.entities.contains_key(name) {
            return Err(invalid(line, format!("duplicate entity `{name}`")));
        }
        Ok(())
    }

    fn fresh_space(&self, name: &str, line: usize) -> Result<(), ModelError> {
        if self.spaces.contains_key(name) || self.eprb.contains_key(name) {
            return Err(invalid(line, format!("duplicate space `{name}`")));
        }
        Ok(())
    }

    fn name_entity(&mut self, name: String, h: Handle) {
        debug_assert_eq!(h.index(), self.entity_names.len());
        self.entity_names.push(name.clone());
        self.entities.insert(name, h);
    }

    fn entity_ref(&self, cur: &mut Cursor) -> Result<Handle, ModelError> {
        let name = cur.word("an entity name")?;
        self.entities
            .get(&name)
            .copied()
            .ok_or_else(|| invalid(cur.line, format!("unknown entity `{name}`")))
    }

    fn name_list(&self, cur: &mut Cursor, open: char, close: char) -> Result<Vec<Handle>, ModelError> {
        cur.punct(open)?;
        let mut out = Vec::new();
        if cur.eat_punct(close) {
            return Ok(out);
        }
        loop {
            out.push(self.entity_ref(cur)?);
            if cur.eat_punct(close) {
                return Ok(out);
            }
            cur.punct(',')?;
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn entity(&self, name: &str) -> Option<Handle> {
        self.entities.get(name).copied()
    }

    /// Declared name of an entity of the model universe.
    pub fn entity_name(&self, h: Handle) -> Option<&str> {
        self.entity_names.get(h.index()).map(String::as_str)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationDecl> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &RelationDecl)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn formulas(&self) -> &[FormulaDecl] {
        &self.formulas
    }

    pub fn eprb_space(&self, name: &str) -> Option<&EprbDecl> {
        self.eprb.get(name)
    }

    pub fn space(&self, name: &str) -> Option<SpaceRef<'_>> {
        if let Some(e) = self.eprb.get(name) {
            return Some(SpaceRef::Eprb(e));
        }
        self.spaces.get(name).map(SpaceRef::Finite)
    }

    /// Space names in declaration order.
    pub fn space_names(&self) -> &[String] {
        &self.space_order
    }

    pub fn region_names(&self) -> &[String] {
        &self.region_order
    }

    /// Free names bound to every declared entity and relation.
    pub fn assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for (name, h) in &self.entities {
            a.set(name.clone(), *h);
        }
        for (name, r) in &self.relations {
            a.set_relation(name.clone(), r.relation.clone());
        }
        a
    }

    pub fn sort_context(&self) -> SortContext {
        self.entities
            .iter()
            .map(|(n, h)| (n.clone(), self.universe.sort(*h).expect("registered")))
            .collect()
    }

    /// Dense distance matrix for a finite space, in carrier order.
    pub fn finite_space(&self, decl: &FiniteSpaceDecl) -> Result<QuasiMetricSpace<'_>, ModelError> {
        let members = self.universe.members(decl.carrier).expect("qset");
        let n = members.len();
        let pos = |h: Handle| members.iter().position(|m| m.index() == h.index()).expect("member");
        let mut given: Vec<Option<f64>> = vec![None; n * n];
        for &(a, b, v, line) in &decl.entries {
            let slot = &mut given[pos(a) * n + pos(b)];
            if slot.is_some() {
                return Err(invalid(
                    line,
                    format!(
                        "distance between `{}` and `{}` given twice",
                        self.entity_names[a.index()],
                        self.entity_names[b.index()]
                    ),
                ));
            }
            *slot = Some(v);
        }
        let mut matrix = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = match (given[i * n + j], given[j * n + i]) {
                    (Some(v), _) | (None, Some(v)) => v,
                    (None, None) if i == j => 0.0,
                    (None, None) => {
                        return Err(invalid(
                            decl.line,
                            format!(
                                "distance between `{}` and `{}` is undefined",
                                self.entity_names[members[i].index()],
                                self.entity_names[members[j].index()]
                            ),
                        ))
                    }
                };
            }
        }
        Ok(QuasiMetricSpace::dense(&self.universe, decl.carrier, matrix).expect("square matrix"))
    }

    /// Validation beyond loading: quasi-function claims, finite-space
    /// completeness, formula well-formedness and expected truth values.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::default();
        for (name, decl) in &self.relations {
            if decl.claims_quasi_function
                && !is_quasi_function(&self.universe, &decl.relation).expect("relation validated")
            {
                report.errors.push(invalid(
                    decl.line,
                    format!("`{name}` is declared a qfunction but is not a quasi-function"),
                ));
            }
        }
        for name in &self.space_order {
            if let Some(decl) = self.spaces.get(name) {
                if let Err(e) = self.finite_space(decl) {
                    report.errors.push(e);
                }
            }
            if let Some(decl) = self.eprb.get(name) {
                if decl.unchecked {
                    let check = validate_diameter(decl.space.region(), decl.space.c());
                    if !check.admissible {
                        report.notes.push(format!(
                            "line {}: space `{name}` skips A2 validation: sup-diameter {} > 2c = {}",
                            decl.line,
                            check.sup_diameter,
                            2.0 * decl.space.c()
                        ));
                    }
                }
            }
        }
        let ctx = self.sort_context();
        let assignment = self.assignment();
        for f in &self.formulas {
            let wff = check_wff(&f.formula, &ctx);
            match (f.expect, wff) {
                (Some(Expectation::IllFormed), Err(_)) => {}
                (Some(Expectation::IllFormed), Ok(())) => report.errors.push(invalid(
                    f.line,
                    format!("formula `{}` is well formed, expected ill-formed", f.name),
                )),
                (_, Err(d)) => report.errors.push(invalid(
                    f.line,
                    format!("formula `{}`: {}", f.name, d.message),
                )),
                (None, Ok(())) => {}
                (Some(expect), Ok(())) => {
                    match evaluate(&f.formula, &self.universe, &assignment) {
                        Ok(v) => {
                            if v != (expect == Expectation::True) {
                                report.errors.push(invalid(
                                    f.line,
                                    format!("formula `{}` evaluates to {v}, expected {}", f.name, !v),
                                ));
                            }
                        }
                        Err(e) => report
                            .errors
                            .push(invalid(f.line, format!("formula `{}`: {e}", f.name))),
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entities_and_relations() {
        let m = Model::parse(
            "# two electrons\n\
             species electron \"spin-1/2\"\n\
             micro e1 electron\n\
             micro e2 electron\n\
             macro a \"probe A\"\n\
             qset q = { e1, a }\n\
             weakpair w = [e1, e2]\n\
             singleton s = [a]\n\
             union u = q + w\n\
             qset src = { e1, e2 }\n\
             qset tgt = { a }\n\
             qfunction f : src -> tgt = { (e1, a), (e2, a) }\n",
        )
        .unwrap();
        let u = m.universe();
        assert_eq!(u.quasi_cardinality(m.entity("w").unwrap()).unwrap().value(), 2);
        assert_eq!(u.quasi_cardinality(m.entity("s").unwrap()).unwrap().value(), 1);
        assert_eq!(u.quasi_cardinality(m.entity("u").unwrap()).unwrap().value(), 3);
        assert_eq!(u.label_of(m.entity("a").unwrap()).unwrap(), Some("probe A"));
        assert_eq!(m.entity_name(m.entity("q").unwrap()), Some("q"));
        assert!(m.check().errors.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Model::parse("species e\nspecies e\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ErrorKind::Validation));
        let e = Model::parse("species e\nmicro x e\nqset q = { x, y }\n").unwrap_err();
        assert_eq!((e.line, e.kind), (3, ErrorKind::Validation));
        assert!(e.message.contains("unknown entity `y`"));
        let e = Model::parse("species e\nqset q = { \n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ErrorKind::Syntax));
        let e = Model::parse("frobnicate x\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let e = Model::parse("species e\nmicro x muon\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Validation);
        let e = Model::parse("macro a A\nmacro a B\n").unwrap_err();
        assert!(e.message.contains("duplicate entity"));
        let e = Model::parse("micro x e\n").unwrap_err();
        assert!(e.message.contains("unknown species"));
    }

    #[test]
    fn eprb_declarations() {
        let text = "species electron\n\
                    region V dim 2\n\
                    ball V 0,0 1\n\
                    ball V 5,0 1\n\
                    point V 0.5,0\n\
                    sample V 10 seed 3\n\
                    eprb S region V c 3.5 species electron\n";
        let m = Model::parse(text).unwrap();
        let s = &m.eprb_space("S").unwrap().space;
        assert_eq!(s.region().sample_points().len(), 11);
        assert_eq!(s.universe().quasi_cardinality(s.pair()).unwrap().value(), 2);

        let bad = text.replace("c 3.5", "c 3");
        let e = Model::parse(&bad).unwrap_err();
        assert_eq!((e.line, e.kind), (7, ErrorKind::Validation));
        assert!(e.message.contains("A2"));

        let planted = text.replace("c 3.5 species electron", "c 3 species electron unchecked");
        let m = Model::parse(&planted).unwrap();
        let report = m.check();
        assert!(report.errors.is_empty());
        assert_eq!(report.notes.len(), 1);

        let frozen = format!("{text}ball V 9,9 1\n");
        assert!(Model::parse(&frozen).unwrap_err().message.contains("in use"));
    }

    #[test]
    fn finite_spaces() {
        let text = "macro a A\nmacro b B\nqset X = { a, b }\nspace D carrier X\ndist D a b 2\n";
        let m = Model::parse(text).unwrap();
        let Some(SpaceRef::Finite(decl)) = m.space("D") else { panic!() };
        let s = m.finite_space(decl).unwrap();
        let (a, b) = (m.entity("a").unwrap(), m.entity("b").unwrap());
        assert_eq!(s.distance(b, a).unwrap(), 2.0);
        assert_eq!(s.distance(a, a).unwrap(), 0.0);

        let m = Model::parse("macro a A\nmacro b B\nqset X = { a, b }\nspace D carrier X\n").unwrap();
        assert_eq!(m.check().errors.len(), 1);
    }

    #[test]
    fn formulas() {
        let text = "species e\nmicro x e\nmicro y e\nmacro a A\n\
                    formula ok expect true : x ~ y\n\
                    formula no expect false : m(a)\n\
                    formula bad expect ill-formed : x = y\n\
                    formula plain : a = a\n";
        let m = Model::parse(text).unwrap();
        assert_eq!(m.formulas().len(), 4);
        assert!(m.check().errors.is_empty(), "{:?}", m.check().errors);

        let wrong = text.replace("expect false : m(a)", "expect true : m(a)");
        assert_eq!(Model::parse(&wrong).unwrap().check().errors.len(), 1);
        let ill = text.replace("formula plain : a = a", "formula plain : x = a");
        assert_eq!(Model::parse(&ill).unwrap().check().errors.len(), 1);
        let e = Model::parse("formula f : x ~\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let e = Model::parse("formula f : x ~ y\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Validation);
    }

    #[test]
    fn quasi_function_claims() {
        let text = "species e\nmicro e1 e\nmicro e2 e\nmacro a A\nmacro b B\n\
                    qset src = { e1, e2 }\nqset tgt = { a, b }\n\
                    qfunction f : src -> tgt = { (e1, a), (e2, b) }\n";
        let m = Model::parse(text).unwrap();
        let errs = m.check().errors;
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].line, 8);
        let relation_only = text.replace("qfunction", "relation");
        assert!(Model::parse(&relation_only).unwrap().check().errors.is_empty());
    }

    #[test]
    fn comments_and_quotes() {
        let m = Model::parse("macro a \"label # not a comment\" # trailing\n").unwrap();
        assert_eq!(
            m.universe().label_of(m.entity("a").unwrap()).unwrap(),
            Some("label # not a comment")
        );
    }
}
