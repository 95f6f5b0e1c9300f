from ltl2slaa.cli import main

raise SystemExit(main())
