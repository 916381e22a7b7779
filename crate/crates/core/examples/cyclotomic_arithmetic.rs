//! Exact arithmetic in cyclotomic fields: roots of unity, Galois
//! conjugates and the square roots used in character tables.
//!
//! ```text
//! cargo run --example cyclotomic_arithmetic
//! ```

use chartab::cyclo::{atlas_sqrt, field_contains_sqrt, Cyclotomic};

fn main() {
    let z5 = Cyclotomic::root_of_unity(5);
    let b5 = &z5 + &z5.pow(4);
    println!("z5 + z5^4        = {b5}");
    println!("(z5 + z5^4)^2    = {}", &b5 * &b5);
    println!("galois 2         = {}", b5.galois(2).unwrap());
    println!("inverse          = {}", b5.inverse().unwrap());

    for d in [-3, 5, -7, -59, -71, -119, -39] {
        let r = atlas_sqrt(d);
        println!("sqrt({d:>4}) has conductor {:>3}; square {}", r.conductor(), &r * &r);
    }

    let r = atlas_sqrt(-59);
    let x = &Cyclotomic::from_integer(1) + &r;
    for p in [2, 3, 5, 7, 61] {
        let fixed = r.galois(p).unwrap() == r;
        println!("p = {p:>2}: sqrt(-59) {}", if fixed { "fixed" } else { "negated" });
    }
    println!("Q(1 + sqrt(-59)) contains sqrt(-59): {}", field_contains_sqrt(std::slice::from_ref(&x), -59));
    println!("json: {}", x.to_json());
}
