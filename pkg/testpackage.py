from nessaid_mining_tests import doTests

doTests()