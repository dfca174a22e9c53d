//! Loading programs: parsing, translation, type checking and the initial heap.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, SyntaxError, TypeError};
use crate::frontend::ast::Decl;
use crate::frontend::translate::{separate_from_globals, Definition, Translator};
use crate::frontend::{parse_expression, parse_program};
use crate::machine::Heap;
use crate::prelude;
use crate::prim::PrimOp;
use crate::syntax::{normalize, rename_expr, Expr, Matching, Name, NameSupply, Renaming};
use crate::types::{check_definitions, infer_expr, signature_type, DataEnv, Scheme, TypeEnv};

/// A type-checked program together with the prelude.
#[derive(Clone, Debug)]
pub struct Program {
    pub data: DataEnv,
    pub types: TypeEnv,
    /// Normalized global definitions, library first.
    pub globals: Vec<(Name, Expr)>,
    /// Notes about the program that do not prevent running it.
    pub warnings: Vec<String>,
    global_set: HashSet<Name>,
    /// Global functions by the address of their matching, for printing
    /// partial applications by name.
    by_matching: HashMap<usize, Name>,
    supply: NameSupply,
}

/// An expression ready to be evaluated against a program.
#[derive(Clone, Debug)]
pub struct EntryPoint {
    /// Program globals plus the expression's own allocations.
    pub heap: Heap,
    /// Location holding the expression.
    pub root: Name,
    pub scheme: Scheme,
}

fn user_names(decls: &[Decl]) -> HashSet<String> {
    decls
        .iter()
        .filter_map(|d| match d {
            Decl::Clause(c) => Some(c.name.clone()),
            _ => None,
        })
        .collect()
}

fn register_types(data: &mut DataEnv, decls: &[Decl]) -> Result<(), Error> {
    for d in decls {
        match d {
            Decl::Data(dd) => {
                for (c, _) in &dd.constructors {
                    if data.ctor_arity.contains_key(c) {
                        return Err(Error::Syntax(SyntaxError {
                            pos: dd.pos,
                            message: format!("constructor `{c}` is already defined"),
                        }));
                    }
                }
                data.add_data(dd).map_err(Error::Type)?;
            }
            Decl::TypeSynonym(n, ps, t, _) => data.add_synonym(n, ps.clone(), t.clone()),
            _ => {}
        }
    }
    Ok(())
}

fn signatures(data: &DataEnv, decls: &[Decl], defined: &HashSet<String>) -> Result<HashMap<Name, crate::types::Type>, Error> {
    let mut sigs = HashMap::new();
    for d in decls {
        if let Decl::Signature(names, t, pos) = d {
            let ty = signature_type(data, t).map_err(|kind| {
                Error::Type(TypeError { kind, binding: names.first().cloned(), pos: Some(*pos) })
            })?;
            for n in names {
                if !defined.contains(n) {
                    return Err(Error::Syntax(SyntaxError {
                        pos: *pos,
                        message: format!("the type signature for `{n}` lacks an accompanying binding"),
                    }));
                }
                sigs.insert(Name::new(n), ty.clone());
            }
        }
    }
    Ok(sigs)
}

impl Program {
    /// The prelude on its own.
    pub fn prelude() -> Result<Program, Error> {
        Program::load("")
    }

    /// Loads a program on top of the prelude.
    pub fn load(src: &str) -> Result<Program, Error> {
        let lib_decls = parse_program(prelude::SOURCE).map_err(Error::Syntax)?;
        let user_decls = parse_program(src).map_err(Error::Syntax)?;

        let mut data = DataEnv::new();
        register_types(&mut data, &lib_decls)?;
        register_types(&mut data, &user_decls)?;

        let mut supply = NameSupply::translation();
        let mut types = TypeEnv::default();
        let mut warnings = Vec::new();

        // Library globals: builtin wrappers, then the prelude source.
        let mut library: Vec<(Name, Expr)> = Vec::new();
        for b in prelude::primitives().into_iter().chain(prelude::constructors(&data)) {
            types.globals.insert(b.name.clone(), b.scheme);
            library.push((b.name, b.expr));
        }
        let lib_defs = Translator::new(&data.ctor_arity, &mut supply).definitions(&lib_decls)?;
        let lib_start = library.len();
        library.extend(lib_defs.iter().map(|d| (d.name.clone(), d.expr.clone())));

        // User definitions take precedence over library ones of the same
        // name; the library keeps using its own under a hidden name.
        let mine = user_names(&user_decls);
        let mut hidden = Renaming::new();
        for (n, _) in &library {
            if mine.contains(n.as_str()) {
                hidden.insert(n.clone(), Name::new(&format!("{}#p", n.as_str())));
                warnings.push(format!("the definition of `{}` shadows the prelude", n.as_str()));
            }
        }
        for (n, e) in &mut library {
            *e = rename_expr(e, &hidden);
            if let Some(h) = hidden.get(n) {
                *n = h.clone();
            }
        }
        for (old, new) in &hidden {
            if let Some(s) = types.globals.remove(old) {
                types.globals.insert(new.clone(), s);
            }
        }

        let user_defs: Vec<Definition> = Translator::new(&data.ctor_arity, &mut supply).definitions(&user_decls)?;

        let mut global_set: HashSet<Name> = library.iter().map(|(n, _)| n.clone()).collect();
        global_set.extend(user_defs.iter().map(|d| d.name.clone()));

        let lib_checked: Vec<(Name, Expr, Option<crate::error::Pos>)> = library[lib_start..]
            .iter()
            .zip(&lib_defs)
            .map(|((n, e), d)| (n.clone(), separate_from_globals(e, &global_set, &mut supply), Some(d.pos)))
            .collect();
        check_definitions(&data, &mut types, &lib_checked, &HashMap::new()).map_err(Error::Type)?;

        let sigs = signatures(&data, &user_decls, &mine)?;
        let user_checked: Vec<(Name, Expr, Option<crate::error::Pos>)> = user_defs
            .iter()
            .map(|d| (d.name.clone(), separate_from_globals(&d.expr, &global_set, &mut supply), Some(d.pos)))
            .collect();
        check_definitions(&data, &mut types, &user_checked, &sigs).map_err(Error::Type)?;

        let mut globals: Vec<(Name, Expr)> = library[..lib_start].to_vec();
        for (n, e, _) in lib_checked.into_iter().chain(user_checked) {
            let e = normalize(&e, &mut supply);
            globals.push((n, e));
        }
        let mut by_matching = HashMap::new();
        for (n, e) in &globals {
            if let Expr::Lam(m) = e {
                by_matching.insert(Arc::as_ptr(m) as usize, n.clone());
            }
        }
        Ok(Program { data, types, globals, warnings, global_set, by_matching, supply })
    }

    pub fn is_global(&self, n: &Name) -> bool {
        self.global_set.contains(n)
    }

    /// The global whose definition is exactly this matching.
    pub fn global_of(&self, m: &Arc<Matching>) -> Option<&Name> {
        self.by_matching.get(&(Arc::as_ptr(m) as usize))
    }

    /// Heap holding every global definition.
    pub fn heap(&self) -> Heap {
        let mut h = Heap::new();
        for (n, e) in &self.globals {
            h.insert(n.clone(), e.clone());
        }
        h
    }

    fn expression(&self, src: &str, supply: &mut NameSupply) -> Result<(Expr, Scheme), Error> {
        let se = parse_expression(src).map_err(Error::Syntax)?;
        let e = Translator::new(&self.data.ctor_arity, supply).expr(&se)?;
        let e = separate_from_globals(&e, &self.global_set, supply);
        let scheme = infer_expr(&self.data, &self.types, &e).map_err(Error::Type)?;
        Ok((e, scheme))
    }

    /// The type of an expression, as displayed to users.
    pub fn type_of(&self, src: &str) -> Result<Scheme, Error> {
        let mut supply = self.supply.clone();
        Ok(self.expression(src, &mut supply)?.1)
    }

    /// Prepares `src` for evaluation: its outermost local bindings are
    /// allocated up front so the first displayed expression shows them as
    /// values.
    pub fn entry(&self, src: &str) -> Result<EntryPoint, Error> {
        let mut supply = self.supply.clone();
        let (e, scheme) = self.expression(src, &mut supply)?;
        let e = normalize(&e, &mut supply);
        let mut heap = self.heap();
        let root = supply.fresh("it");
        let body = hoist(&e, &mut heap, &mut supply);
        heap.insert(root.clone(), body);
        Ok(EntryPoint { heap, root, scheme })
    }
}

impl EntryPoint {
    /// The control that starts evaluation, deep when `force` is set.
    pub fn start(&self, force: bool) -> Expr {
        if force {
            Expr::Prim(PrimOp::Force, vec![Expr::Var(self.root.clone())])
        } else {
            Expr::Var(self.root.clone())
        }
    }
}

/// Moves the bindings of a top-level `let` (and of lets directly bound by
/// it) into the heap, returning what remains of the expression.
fn hoist(e: &Expr, heap: &mut Heap, supply: &mut NameSupply) -> Expr {
    let Expr::Lam(m) = e else { return e.clone() };
    let Matching::Where(body, binds) = &**m else { return e.clone() };
    let Matching::Return(inner, None) = &**body else { return e.clone() };
    let mut r = Renaming::new();
    for n in binds.names() {
        r.insert(n.clone(), supply.fresh(n.base()));
    }
    for (n, rhs) in &binds.0 {
        let rhs = hoist(&rename_expr(rhs, &r), heap, supply);
        heap.insert(r[n].clone(), rhs);
    }
    hoist(&rename_expr(inner, &r), heap, supply)
}
