#!/usr/bin/env python3
"""
Simple wrapper to run the full verification suite with the acceptance settings.
"""

import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import logging

from config import LOGS_DIR

os.makedirs(LOGS_DIR, exist_ok=True)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler(os.path.join(LOGS_DIR, 'soliton_verification.log')),
        logging.StreamHandler()
    ]
)

logger = logging.getLogger(__name__)

ACCEPTANCE_R_OFFSETS = [0.5, 1.0, 2.0]
ACCEPTANCE_C_VALUES = [0.5, 1.0, 2.0]


def run_verification_suite(resolution=64, out=None):
    """Run every suite phase on the catalog at the acceptance r and c grids."""
    try:
        from src.main import SuiteConfig, SUITE_CHECKS, VerificationSuiteOrchestrator, print_summary
        from src.utils.reporting import to_jsonable

        print("=" * 80)
        print("SOLITON CURVATURE VERIFICATION SUITE")
        print("=" * 80)
        print(f"Resolution: {resolution}")
        print(f"r offsets above min f: {ACCEPTANCE_R_OFFSETS}; c values: {ACCEPTANCE_C_VALUES}")
        print("=" * 80)

        config = SuiteConfig(
            checks=list(SUITE_CHECKS),
            r_offsets=list(ACCEPTANCE_R_OFFSETS),
            c_values=list(ACCEPTANCE_C_VALUES),
            rigidity_r=[0.5, 0.75],
            resolution=resolution,
            out=out,
        )
        config.validate()

        orchestrator = VerificationSuiteOrchestrator(config)
        report = orchestrator.run_suite()
        paths = orchestrator.save_report(report)

        print_summary(to_jsonable(report))
        for path in paths:
            print(f"Report saved to: {path}")
        return report.exit_code

    except Exception as e:
        logger.error(f"Verification suite failed: {e}")
        import traceback
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description='Run the full soliton verification suite')
    parser.add_argument('--res', type=int, default=64, help='Quadrature resolution')
    parser.add_argument('--out', default=None, help='Report path')

    args = parser.parse_args()
    sys.exit(run_verification_suite(args.res, args.out))
