# Events, scenarios and episode simulation