from torelli_lab.cli import main

if __name__ == '__main__':
    # Settings come from the environment (and a .env file), see torelli_lab/config.py
    raise SystemExit(main())
