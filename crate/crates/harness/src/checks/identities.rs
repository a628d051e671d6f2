//! Identities of `W_n(R)` evaluated on concrete vectors.

use serde_json::Value;
use witt_core::{Elem, RingHandle, WittVector};

use crate::suite::{Arg, Ctx, Identity, Mismatch};

type Res = witt_core::Result<Option<Mismatch>>;

macro_rules! ensure {
    ($e:expr) => {
        if let Some(m) = $e {
            return Ok(Some(m));
        }
    };
}

fn pl(x: &WittVector) -> Value {
    x.parent().payload(x)
}

fn same(got: &WittVector, expected: &WittVector, detail: impl FnOnce() -> String) -> Option<Mismatch> {
    (got != expected).then(|| Mismatch {
        expected: pl(expected),
        got: pl(got),
        detail: detail(),
    })
}

fn same_elems(ring: &RingHandle, got: &[Elem], expected: &[Elem], detail: &str) -> Option<Mismatch> {
    let show = |v: &[Elem]| Value::Array(v.iter().map(|&e| ring.payload(e)).collect());
    (got != expected).then(|| Mismatch {
        expected: show(expected),
        got: show(got),
        detail: detail.to_string(),
    })
}

pub fn always(_: &Ctx) -> Option<String> {
    None
}

pub fn needs_length_two(ctx: &Ctx) -> Option<String> {
    (ctx.n < 2).then(|| "not applicable: needs n >= 2".to_string())
}

pub fn needs_char_p(ctx: &Ctx) -> Option<String> {
    (!ctx.char_p()).then(|| {
        format!(
            "not applicable: characteristic {} is not {}",
            ctx.ring.characteristic(),
            ctx.p
        )
    })
}

fn needs_char_p_length_two(ctx: &Ctx) -> Option<String> {
    needs_char_p(ctx).or_else(|| needs_length_two(ctx))
}

// ghost-hom

fn ghost_add(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let (gx, gy) = (w.ghost(&a[0])?, w.ghost(&a[1])?);
    let want: Vec<Elem> = gx.iter().zip(&gy).map(|(&s, &t)| r.add(s, t)).collect();
    Ok(same_elems(r, &w.ghost(&w.add(&a[0], &a[1])?)?, &want, "ghost(x+y) = ghost(x)+ghost(y)"))
}

fn ghost_mul(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let (gx, gy) = (w.ghost(&a[0])?, w.ghost(&a[1])?);
    let want: Vec<Elem> = gx.iter().zip(&gy).map(|(&s, &t)| r.mul(s, t)).collect();
    Ok(same_elems(r, &w.ghost(&w.mul(&a[0], &a[1])?)?, &want, "ghost(xy) = ghost(x)ghost(y)"))
}

fn ghost_neg(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let want: Vec<Elem> = w.ghost(&a[0])?.iter().map(|&s| r.neg(s)).collect();
    Ok(same_elems(r, &w.ghost(&w.neg(&a[0])?)?, &want, "ghost(-x) = -ghost(x)"))
}

fn ghost_shift(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let g = w.ghost(&a[0])?;
    let mut want = vec![r.zero()];
    want.extend(g[..ctx.n - 1].iter().map(|&s| r.scale(ctx.p, s)));
    Ok(same_elems(r, &w.ghost(&w.verschiebung(&a[0])?)?, &want, "ghost(V x) = (0, p w_0, p w_1, ...)"))
}

fn ghost_teichmuller(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let x = a[0].coords()[0];
    let want: Vec<Elem> = (0..ctx.n).map(|i| r.pow(x, ctx.p.pow(i as u32))).collect();
    Ok(same_elems(r, &w.ghost(&a[0])?, &want, "ghost([r]) = (r, r^p, r^(p^2), ...)"))
}

fn commutative(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    ensure!(same(&w.add(&a[0], &a[1])?, &w.add(&a[1], &a[0])?, || "x+y = y+x".into()));
    Ok(same(&w.mul(&a[0], &a[1])?, &w.mul(&a[1], &a[0])?, || "xy = yx".into()))
}

fn add_assoc(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let lhs = w.add(&w.add(&a[0], &a[1])?, &a[2])?;
    let rhs = w.add(&a[0], &w.add(&a[1], &a[2])?)?;
    Ok(same(&lhs, &rhs, || "(x+y)+z = x+(y+z)".into()))
}

fn mul_assoc(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let lhs = w.mul(&w.mul(&a[0], &a[1])?, &a[2])?;
    let rhs = w.mul(&a[0], &w.mul(&a[1], &a[2])?)?;
    Ok(same(&lhs, &rhs, || "(xy)z = x(yz)".into()))
}

fn distributive(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let lhs = w.mul(&a[0], &w.add(&a[1], &a[2])?)?;
    let rhs = w.add(&w.mul(&a[0], &a[1])?, &w.mul(&a[0], &a[2])?)?;
    Ok(same(&lhs, &rhs, || "x(y+z) = xy+xz".into()))
}

fn units_and_inverses(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let x = &a[0];
    ensure!(same(&w.add(x, &w.zero())?, x, || "x+0 = x".into()));
    ensure!(same(&w.mul(x, &w.one())?, x, || "x·1 = x".into()));
    Ok(same(&w.add(x, &w.neg(x)?)?, &w.zero(), || "x+(-x) = 0".into()))
}

fn restrict_hom(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let (sum, prod) = (w.add(&a[0], &a[1])?, w.mul(&a[0], &a[1])?);
    for m in 1..=ctx.n {
        let l = w.level(m)?;
        let (x, y) = (w.restrict(&a[0], m)?, w.restrict(&a[1], m)?);
        ensure!(same(&w.restrict(&sum, m)?, &l.add(&x, &y)?, || format!("restrict to {m} of x+y")));
        ensure!(same(&w.restrict(&prod, m)?, &l.mul(&x, &y)?, || format!("restrict to {m} of xy")));
    }
    Ok(None)
}

fn restrict_teichmuller(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let r = a[0].coords()[0];
    for m in 1..=ctx.n {
        ensure!(same(&w.restrict(&a[0], m)?, &w.level(m)?.teichmuller(r), || format!("restrict to {m} of [r]")));
    }
    Ok(None)
}

fn restrict_verschiebung(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let v = w.verschiebung(&a[0])?;
    for m in 1..=ctx.n {
        let l = w.level(m)?;
        let want = l.verschiebung(&w.restrict(&a[0], m)?)?;
        ensure!(same(&w.restrict(&v, m)?, &want, || format!("restrict to {m} of V(x)")));
    }
    Ok(None)
}

fn restrict_frobenius(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let f = w.frobenius(&a[0])?;
    let lower = w.level(ctx.n - 1)?;
    for m in 1..ctx.n {
        let want = w.level(m + 1)?.frobenius(&w.restrict(&a[0], m + 1)?)?;
        ensure!(same(&lower.restrict(&f, m)?, &want, || format!("restrict to {m} of F(x)")));
    }
    Ok(None)
}

fn teichmuller_multiplicative(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let rs = ctx.ring.mul(a[0].coords()[0], a[1].coords()[0]);
    Ok(same(&w.mul(&a[0], &a[1])?, &w.teichmuller(rs), || "[r][s] = [rs]".into()))
}

pub fn ghost_hom() -> Vec<Identity> {
    use Arg::*;
    vec![
        Identity { name: "ghost-add", args: &[Witt, Witt], applies: always, eval: ghost_add },
        Identity { name: "ghost-mul", args: &[Witt, Witt], applies: always, eval: ghost_mul },
        Identity { name: "ghost-neg", args: &[Witt], applies: always, eval: ghost_neg },
        Identity { name: "ghost-shift", args: &[Witt], applies: always, eval: ghost_shift },
        Identity { name: "ghost-teichmuller", args: &[Teich], applies: always, eval: ghost_teichmuller },
        Identity { name: "commutative", args: &[Witt, Witt], applies: always, eval: commutative },
        Identity { name: "add-associative", args: &[Witt, Witt, Witt], applies: always, eval: add_assoc },
        Identity { name: "mul-associative", args: &[Witt, Witt, Witt], applies: always, eval: mul_assoc },
        Identity { name: "distributive", args: &[Witt, Witt, Witt], applies: always, eval: distributive },
        Identity { name: "units-and-inverses", args: &[Witt], applies: always, eval: units_and_inverses },
        Identity { name: "teichmuller-multiplicative", args: &[Teich, Teich], applies: always, eval: teichmuller_multiplicative },
        Identity { name: "restrict-ring-map", args: &[Witt, Witt], applies: always, eval: restrict_hom },
        Identity { name: "restrict-teichmuller", args: &[Teich], applies: always, eval: restrict_teichmuller },
        Identity { name: "restrict-verschiebung", args: &[Witt], applies: always, eval: restrict_verschiebung },
        Identity { name: "restrict-frobenius", args: &[Witt], applies: needs_length_two, eval: restrict_frobenius },
    ]
}

// fv-identities

fn frobenius_after_verschiebung(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let fv = w.frobenius(&w.verschiebung(&a[0])?)?;
    let px = w.restrict(&w.p_mul(&a[0])?, ctx.n - 1)?;
    Ok(same(&fv, &px, || "F(V(x)) = p·x".into()))
}

fn v_one(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let vy = w.verschiebung(&a[0])?;
    let lhs = w.mul(&w.verschiebung(&w.one())?, &vy)?;
    Ok(same(&lhs, &w.p_mul(&vy)?, || "V(1)·w = p·w for w = V(y)".into()))
}

fn v_product(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let lhs = w.mul(&w.verschiebung(&a[0])?, &w.verschiebung(&a[1])?)?;
    let rhs = w.p_mul(&w.verschiebung(&w.mul(&a[0], &a[1])?)?)?;
    Ok(same(&lhs, &rhs, || "V(x)V(y) = p·V(xy)".into()))
}

fn projection_formula(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let lower = w.level(ctx.n - 1)?;
    let y = w.restrict(&a[1], ctx.n - 1)?;
    let lhs = w.mul(&a[0], &w.verschiebung_from_lower(&y)?)?;
    let rhs = w.verschiebung_from_lower(&lower.mul(&w.frobenius(&a[0])?, &y)?)?;
    Ok(same(&lhs, &rhs, || "x·V(y) = V(F(x)·y)".into()))
}

fn v_power(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let p = ctx.p;
    let lhs = w.pow(&w.verschiebung(&a[0])?, p)?;
    let rhs = w.scale(p.pow((p - 1) as u32), &w.verschiebung(&w.pow(&a[0], p)?)?)?;
    Ok(same(&lhs, &rhs, || "V(x)^p = p^(p-1)·V(x^p)".into()))
}

fn p_mul_coordinates(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r, p) = (ctx.witt(), &ctx.ring, ctx.p);
    let py = w.p_mul(&a[0])?;
    let (y0, got) = (a[0].coords()[0], py.coords());
    let p_y0 = r.scale(p, y0);
    ensure!(same_elems(r, &got[..1], &[p_y0], "(py)_0 = p·y_0"));
    if ctx.n < 2 {
        return Ok(None);
    }
    let y0p = r.pow(y0, p);
    let p_y1 = r.scale(p, a[0].coords()[1]);
    let correction = r.sub(r.one(), r.int(p.pow((p - 1) as u32) as i64));
    let general = r.add(r.mul(correction, y0p), p_y1);
    ensure!(same_elems(r, &got[1..2], &[general], "(py)_1 = (1 - p^(p-1))·y_0^p + p·y_1"));
    if p_y0 == r.zero() {
        ensure!(same_elems(r, &got[1..2], &[r.add(y0p, p_y1)], "(py)_1 = y_0^p + p·y_1 when p·y_0 = 0"));
    }
    Ok(None)
}

fn p_teichmuller(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r) = (ctx.witt(), &ctx.ring);
    let x = a[0].coords()[0];
    if r.scale(ctx.p, x) != r.zero() {
        return Ok(None);
    }
    let mut c = vec![r.zero(); ctx.n];
    if ctx.n > 1 {
        c[1] = r.pow(x, ctx.p);
    }
    Ok(same(&w.p_mul(&a[0])?, &w.from_coords(c)?, || "p·[r] = (0, r^p, 0, ...) when p·r = 0".into()))
}

fn frobenius_teichmuller(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let x = a[0].coords()[0];
    let want = w.level(ctx.n - 1)?.teichmuller(ctx.ring.pow(x, ctx.p));
    Ok(same(&w.frobenius(&a[0])?, &want, || "F([r]) = [r^p]".into()))
}

pub fn fv_identities() -> Vec<Identity> {
    use Arg::*;
    vec![
        Identity { name: "frobenius-verschiebung", args: &[Witt], applies: needs_length_two, eval: frobenius_after_verschiebung },
        Identity { name: "v-one-times-v-image", args: &[Witt], applies: always, eval: v_one },
        Identity { name: "v-product", args: &[Witt, Witt], applies: always, eval: v_product },
        Identity { name: "projection-formula", args: &[Witt, Witt], applies: needs_length_two, eval: projection_formula },
        Identity { name: "v-power", args: &[Witt], applies: always, eval: v_power },
        Identity { name: "p-mul-coordinates", args: &[Witt], applies: always, eval: p_mul_coordinates },
        Identity { name: "p-teichmuller", args: &[Teich], applies: always, eval: p_teichmuller },
        Identity { name: "frobenius-teichmuller", args: &[Teich], applies: needs_length_two, eval: frobenius_teichmuller },
    ]
}

// charp-identities

fn frobenius_variants(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let same_length = w.restrict(&w.frobenius_charp(&a[0])?, ctx.n - 1)?;
    Ok(same(&w.frobenius(&a[0])?, &same_length, || "F agrees with coordinatewise p-th powers".into()))
}

fn vv_product(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r, p, n) = (ctx.witt(), &ctx.ring, ctx.p, ctx.n);
    let (x, y) = (&a[0], &a[1]);
    for u in 0..n {
        for v in 0..n - u {
            let lhs = w.mul(&w.verschiebung_pow(x, u)?, &w.verschiebung_pow(y, v)?)?;
            let inner = w.mul(&w.frobenius_charp_pow(x, v)?, &w.frobenius_charp_pow(y, u)?)?;
            let rhs = w.verschiebung_pow(&inner, u + v)?;
            ensure!(same(&lhs, &rhs, || format!("V^{u}(w)V^{v}(x) = V^{}(F^{v}(w)F^{u}(x))", u + v)));
            let coord = r.mul(
                r.pow(x.coords()[0], p.pow(v as u32)),
                r.pow(y.coords()[0], p.pow(u as u32)),
            );
            ensure!(same_elems(
                r,
                &lhs.coords()[u + v..u + v + 1],
                &[coord],
                &format!("coordinate {} of V^{u}(w)V^{v}(x) is w_0^(p^{v}) x_0^(p^{u})", u + v)
            ));
        }
    }
    Ok(None)
}

fn v_power_m(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, n) = (ctx.witt(), ctx.n);
    let x = &a[0];
    for u in 1..n {
        for m in 1..=((n - 1) / u) {
            let lhs = w.pow(&w.verschiebung_pow(x, u)?, m as u64)?;
            let inner = w.frobenius_charp_pow(&w.pow(x, m as u64)?, (m - 1) * u)?;
            let rhs = w.verschiebung_pow(&inner, m * u)?;
            ensure!(same(&lhs, &rhs, || format!("V^{u}(w)^{m} = V^{}(F^{}(w^{m}))", m * u, (m - 1) * u)));
        }
    }
    Ok(None)
}

/// `x` with `w = [w_0] + V(x)`: the coordinates of `w` shifted down.
fn tail(ctx: &Ctx, wv: &WittVector) -> witt_core::Result<WittVector> {
    let mut c = wv.coords()[1..].to_vec();
    c.push(ctx.ring.zero());
    ctx.witt().from_coords(c)
}

fn frobenius_decomposition(ctx: &Ctx, a: &[WittVector]) -> Res {
    let (w, r, p) = (ctx.witt(), &ctx.ring, ctx.p);
    let wv = &a[0];
    let w0 = wv.coords()[0];
    let x = tail(ctx, wv)?;
    ensure!(same(wv, &w.add(&w.teichmuller(w0), &w.verschiebung(&x)?)?, || "w = [w_0] + V(x)".into()));
    for u in 1..ctx.n {
        let lhs = w.frobenius_charp_pow(wv, u)?;
        let rhs = w.add(
            &w.teichmuller(r.pow(w0, p.pow(u as u32))),
            &w.p_mul(&w.frobenius_charp_pow(&x, u - 1)?)?,
        )?;
        ensure!(same(&lhs, &rhs, || format!("F^{u}(w) = [w_0^(p^{u})] + p·F^{}(x)", u - 1)));
    }
    Ok(None)
}

/// `V^u([r])w = V^u([r w_0^(p^u)]) + p·V^u([r]·F^(u-1)(x))` for `w = [w_0] + V(x)`.
/// With `printed = true` the factor `[r]` in the last term is dropped.
pub fn v_teichmuller_sides(
    ctx: &Ctx,
    a: &[WittVector],
    u: usize,
    printed: bool,
) -> witt_core::Result<(WittVector, WittVector)> {
    let (w, r, p) = (ctx.witt(), &ctx.ring, ctx.p);
    let (t, wv) = (a[0].coords()[0], &a[1]);
    let w0 = wv.coords()[0];
    let x = tail(ctx, wv)?;
    let lhs = w.mul(&w.verschiebung_pow(&a[0], u)?, wv)?;
    let head = w.verschiebung_pow(&w.teichmuller(r.mul(t, r.pow(w0, p.pow(u as u32)))), u)?;
    let mut inner = w.frobenius_charp_pow(&x, u - 1)?;
    if !printed {
        inner = w.mul(&a[0], &inner)?;
    }
    let rhs = w.add(&head, &w.p_mul(&w.verschiebung_pow(&inner, u)?)?)?;
    Ok((lhs, rhs))
}

fn v_teichmuller_product(ctx: &Ctx, a: &[WittVector]) -> Res {
    for u in 1..ctx.n {
        let (lhs, rhs) = v_teichmuller_sides(ctx, a, u, false)?;
        ensure!(same(&lhs, &rhs, || format!(
            "V^{u}([r])w = V^{u}([r w_0^(p^{u})]) + p·V^{u}([r]F^{}(x))",
            u - 1
        )));
    }
    Ok(None)
}

pub fn charp_identities() -> Vec<Identity> {
    use Arg::*;
    vec![
        Identity { name: "frobenius-variants-agree", args: &[Witt], applies: needs_char_p_length_two, eval: frobenius_variants },
        Identity { name: "vv-product", args: &[Witt, Witt], applies: needs_char_p, eval: vv_product },
        Identity { name: "v-power-m", args: &[Witt], applies: needs_char_p, eval: v_power_m },
        Identity { name: "frobenius-decomposition", args: &[Witt], applies: needs_char_p, eval: frobenius_decomposition },
        Identity { name: "v-teichmuller-product", args: &[Teich, Witt], applies: needs_char_p, eval: v_teichmuller_product },
    ]
}

// torsion-location

fn valuation_sandwich(ctx: &Ctx, a: &[WittVector]) -> Res {
    let w = ctx.witt();
    let x = &a[0];
    let (v, pv) = (w.v_pseudovaluation(x)?, w.v_pseudovaluation(&w.p_mul(x)?)?);
    let bad = |msg: String| {
        Some(Mismatch {
            expected: Value::String(msg.clone()),
            got: serde_json::json!({ "v(w)": v, "v(pw)": pv }),
            detail: msg,
        })
    };
    if pv < v {
        return Ok(bad("v(w) <= v(pw)".into()));
    }
    if ctx.preduced() && pv > v + 1 {
        return Ok(bad("v(pw) <= v(w) + 1 for preduced R".into()));
    }
    Ok(None)
}

pub fn torsion_identities() -> Vec<Identity> {
    vec![Identity { name: "valuation-sandwich", args: &[Arg::Witt], applies: always, eval: valuation_sandwich }]
}
