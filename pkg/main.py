"""
Main entry point for the OSOMA toolkit
"""

import logging
import sys
from pathlib import Path

from src.cli import main as cli_main
from src.config import settings


def setup_logging():
    """Setup logging configuration"""
    # Create logs directory if it doesn't exist
    log_dir = Path(settings.LOG_FILE).parent
    log_dir.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(settings.LOG_FILE),
            logging.StreamHandler()
        ]
    )


def main():
    """Main application entry point"""
    setup_logging()
    logger = logging.getLogger(__name__)
    logger.info("Starting OSOMA toolkit")

    try:
        code = cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        code = 130
    sys.exit(code)


if __name__ == "__main__":
    main()
