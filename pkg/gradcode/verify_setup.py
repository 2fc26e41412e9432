#!/usr/bin/env python3
"""
Quick verification script to check the installation reproduces the worked
examples before running sweeps or simulations.
"""
import sys
from fractions import Fraction
from pathlib import Path

# Add parent to path
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from gradcode.config import configure_logging
from gradcode.constructions import (
    build_balanced,
    build_cyclic2,
    build_from_tdesign,
    delta_star,
    hadamard_design,
    tdesign_alpha,
)
from gradcode.decoding import decode, stopping_straggler_1, verify_certificate
from gradcode.feasibility import oracle_feasible


def check_dependencies():
    """Check the numeric stack imports."""
    print("=" * 60)
    print("Checking Dependencies")
    print("=" * 60)

    ok = True
    for name in ["numpy", "pandas", "scipy", "sympy", "pydantic", "dotenv"]:
        try:
            module = __import__(name)
            print(f"✓ {name:10s} {getattr(module, '__version__', '')}")
        except ImportError as e:
            print(f"❌ {name:10s} missing ({e})")
            ok = False

    if ok:
        print("\n✅ All dependencies available!")
    else:
        print("\nInstall with: pip install -e .[dev]")
    return ok


def check_constructions():
    """Rebuild the small example schemes."""
    print("\n" + "=" * 60)
    print("Checking Constructions")
    print("=" * 60)

    try:
        scheme = build_cyclic2(9, Fraction(7, 9), 4)
        assert scheme.support(0, 1) == {0}, f"cyclic2 prefix row wrong: {sorted(scheme.support(0, 1))}"
        print("✓ cyclic2 (n=9, alpha=7/9, s=4) prefix rows")

        design = hadamard_design()
        design.check()
        assert tdesign_alpha(design) == Fraction(13, 14)
        print(f"✓ Hadamard 3-(8,4,1) design, alpha = {tdesign_alpha(design)}")

        assert delta_star(19, 10, Fraction(87, 100), 1) == 9
        assert delta_star(19, 10, Fraction(87, 100), 2) == 6
        assert delta_star(19, 10, Fraction(87, 100), 3) == 3
        print("✓ delta* sweep (n=19, s=10, alpha=0.87) = 9, 6, 3")

        print("\n✅ Constructions reproduce the examples!")
        return True

    except Exception as e:
        print(f"\n❌ Construction check failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def check_decoders():
    """Run the decoders on the worked straggler sets."""
    print("\n" + "=" * 60)
    print("Checking Decoders")
    print("=" * 60)

    try:
        stop = stopping_straggler_1(18, 15, 5, {4, 8, 10, 11, 12, 13, 15})
        assert stop == 12, f"stopping straggler: expected 12, got {stop}"
        print("✓ Stopping straggler walk (n=18, beta=15, r=5)")

        scheme = build_cyclic2(9, Fraction(7, 9), 4)
        for stragglers in [(1, 3, 4), (1, 3, 4, 8)]:
            cert = decode(scheme, stragglers)
            assert not verify_certificate(scheme, stragglers, cert)
            print(f"✓ cyclic2 stragglers {[w + 1 for w in stragglers]}: {cert.recovered_count} recovered")

        scheme = build_balanced(5, Fraction(7, 10), 3, 2)
        cert = decode(scheme, (2, 3, 4))
        assert cert.recovered_count == 7, f"balanced: expected 7, got {cert.recovered_count}"
        print("✓ balanced (n=5, y=2) stragglers [3, 4, 5]: 7 recovered")

        print("\n✅ Decoders produce sound certificates!")
        return True

    except Exception as e:
        print(f"\n❌ Decoder check failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def check_oracle():
    """Exhaustive oracle on the t-design scheme."""
    print("\n" + "=" * 60)
    print("Checking Feasibility Oracle")
    print("=" * 60)

    try:
        verdict = oracle_feasible(build_from_tdesign(hadamard_design()))
        assert verdict.feasible, f"oracle rejected the t-design scheme: {verdict.to_dict()}"
        print(f"✓ {verdict.sets_checked} straggler sets, worst recovery {verdict.worst_recovered}")
        print("\n✅ Oracle working!")
        return True

    except Exception as e:
        print(f"\n❌ Oracle check failed: {e}")
        return False


def main():
    """Run all checks."""
    configure_logging("WARNING")
    print("\n" + "=" * 60)
    print("GRADCODE - SETUP VERIFICATION")
    print("=" * 60 + "\n")

    checks = []

    checks.append(("Dependencies", check_dependencies()))
    checks.append(("Constructions", check_constructions()))
    checks.append(("Decoders", check_decoders()))
    checks.append(("Oracle", check_oracle()))

    print("\n" + "=" * 60)
    print("VERIFICATION SUMMARY")
    print("=" * 60)

    all_passed = all(passed for _, passed in checks)

    for name, passed in checks:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"{status} - {name}")

    print("\n" + "=" * 60)

    if all_passed:
        print("✅ ALL CHECKS PASSED!")
        print("\nTry a comparison run:")
        print("  gradcode compare --n 100 --s 19 --schemes forget-s,cyclic1:.82,frc")
    else:
        print("❌ SOME CHECKS FAILED")
        sys.exit(1)

    print("=" * 60)


if __name__ == "__main__":
    main()
