use super::wff::{Abbrev, Wff, WffKind};

// Context levels, loosest first.
const TOP: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const EQ: u8 = 4;
const NOT: u8 = 5;
const APP: u8 = 6;
const ATOM: u8 = 7;

/// Canonical surface text. Application is juxtaposition associating to the
/// left, grouping uses `[...]`, and every variable and constant carries its
/// type annotation.
pub fn print_wff(w: &Wff) -> String {
    let mut out = String::new();
    write(w, TOP, &mut out);
    out
}

fn bracket(out: &mut String, wrap: bool, f: impl FnOnce(&mut String)) {
    if wrap {
        out.push('[');
    }
    f(out);
    if wrap {
        out.push(']');
    }
}

fn binary(out: &mut String, ctx: u8, level: u8, l: (&Wff, u8), op: &str, r: (&Wff, u8)) {
    bracket(out, ctx > level, |out| {
        write(l.0, l.1, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write(r.0, r.1, out);
    });
}

fn binder(out: &mut String, ctx: u8, kw: &str, x: &super::Var, body: &Wff) {
    bracket(out, ctx > TOP, |out| {
        out.push_str(kw);
        out.push_str(&x.to_string());
        out.push_str(". ");
        write(body, TOP, out);
    });
}

fn write(w: &Wff, ctx: u8, out: &mut String) {
    match w.kind() {
        WffKind::Var(v) => out.push_str(&v.to_string()),
        WffKind::Const(c) => out.push_str(&c.to_string()),
        WffKind::App(f, a) => {
            if let Some((l, r)) = w.as_equation() {
                binary(out, ctx, EQ, (l, NOT), "=", (r, NOT));
            } else {
                bracket(out, ctx > APP, |out| {
                    write(f, APP, out);
                    out.push(' ');
                    write(a, ATOM, out);
                });
            }
        }
        WffKind::Abs(x, b) => binder(out, ctx, "\\", x, b),
        WffKind::Abbr(ab) => match ab {
            Abbrev::True => out.push('T'),
            Abbrev::False => out.push('F'),
            Abbrev::AndConst => out.push_str("(/\\)"),
            Abbrev::OrConst => out.push_str("(\\/)"),
            Abbrev::ImpliesConst => out.push_str("(=>)"),
            Abbrev::NotConst => out.push_str("(~)"),
            Abbrev::Bottom(t) => {
                out.push_str("bot_");
                out.push_str(&t.annotation());
            }
            Abbrev::Forall(x, b) => binder(out, ctx, "forall ", x, b),
            Abbrev::Exists(x, b) => binder(out, ctx, "exists ", x, b),
            Abbrev::ExistsUnique(x, b) => binder(out, ctx, "exists1 ", x, b),
            Abbrev::Description(x, b) => binder(out, ctx, "I ", x, b),
            Abbrev::Not(a) => bracket(out, ctx > NOT, |out| {
                out.push('~');
                write(a, NOT, out);
            }),
            Abbrev::And(a, b) => binary(out, ctx, AND, (a, AND), "/\\", (b, EQ)),
            Abbrev::Or(a, b) => binary(out, ctx, OR, (a, OR), "\\/", (b, AND)),
            Abbrev::Implies(a, b) => binary(out, ctx, IMPLIES, (a, OR), "=>", (b, IMPLIES)),
            Abbrev::NotEquals(a, b) => binary(out, ctx, EQ, (a, NOT), "/=", (b, NOT)),
            Abbrev::QuasiEquals(a, b) => binary(out, ctx, EQ, (a, NOT), "~=", (b, NOT)),
            Abbrev::IsDefined(a) => {
                out.push_str("def(");
                write(a, TOP, out);
                out.push(')');
            }
            Abbrev::IsUndefined(a) => {
                out.push_str("undef(");
                write(a, TOP, out);
                out.push(')');
            }
        },
    }
}
