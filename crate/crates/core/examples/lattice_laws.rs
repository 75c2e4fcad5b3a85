//! The cost lattice: extended naturals and a two-resource product.

use rbmltt::lattice::{ExtNat, Lattice, Product};

fn main() {
    let three = ExtNat::Fin(3);
    let five = ExtNat::Fin(5);
    println!("3 ⊕ 5 = {}", three.combine(&five));
    println!("3 ⊔ 5 = {}", three.join(&five));
    println!("3 ⊕ ∞ = {}", three.combine(&ExtNat::Inf));
    println!("4 ⊗ 3 = {}", three.nfold(4));
    println!("0 ⊗ ∞ = {}", ExtNat::Inf.nfold(0));
    println!("3 ≼ 5: {}, ∞ ≼ 5: {}", three.leq(&five), ExtNat::Inf.leq(&five));

    // time and space tracked together; the order is componentwise
    let a = Product(ExtNat::Fin(10), ExtNat::Fin(2));
    let b = Product(ExtNat::Fin(4), ExtNat::Fin(7));
    println!("(10,2) ⊕ (4,7) = {}", a.combine(&b));
    println!("(10,2) ⊔ (4,7) = {}", a.join(&b));
    println!("comparable: {}", a.leq(&b) || b.leq(&a));
}
