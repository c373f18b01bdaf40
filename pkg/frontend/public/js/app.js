/** DOM wiring for the play UI.
 *
 * The page only ever renders positions received from the service; after a
 * human move it automatically requests the engine reply while it is the
 * engine's turn.  One mutation is in flight at a time.
 */
import { ServiceApiError, ServiceClient } from "./api.js";
import { abbreviate, buildViewModel } from "./board.js";
import { composeMove, emptyDraft, parsePileText, validateDraft } from "./compose.js";
const client = new ServiceClient("");
const state = {
    session: null,
    draft: emptyDraft(),
    hint: null,
    busy: false,
    expanded: new Set(),
};
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function setError(message) {
    el("error").textContent = message;
}
function setStatus(message) {
    el("status").textContent = message;
}
async function mutate(action) {
    if (state.busy)
        return;
    state.busy = true;
    setError("");
    try {
        state.session = await action();
        state.hint = null;
        state.draft = emptyDraft();
        render();
        await autoEngineReply();
    }
    catch (err) {
        if (err instanceof ServiceApiError) {
            setError(err.reason); // the server's reason, verbatim
        }
        else {
            setError(String(err instanceof Error ? err.message : err));
        }
    }
    finally {
        state.busy = false;
        render();
    }
}
async function autoEngineReply() {
    const s = state.session;
    if (!s || s.is_terminal || s.engine_side !== s.whose_turn)
        return;
    setStatus("engine is thinking...");
    const slider = el("delay-r");
    const delayR = slider.value !== "0" ? slider.value : undefined;
    state.session = await client.engineReply(s.id, delayR);
    state.draft = emptyDraft();
    render();
}
// -- new game ----------------------------------------------------------------
async function newGame() {
    const lines = el("piles-input").value
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line !== "");
    if (lines.length === 0) {
        setError("enter at least one pile, e.g. 2^2 * 3^2");
        return;
    }
    let piles;
    try {
        piles = lines.map(parsePileText);
    }
    catch (err) {
        setError(err instanceof Error ? err.message : String(err));
        return;
    }
    const power = el("power-input").value;
    const engineSide = el("engine-side").value;
    await mutate(() => client.createGame(piles, power, engineSide));
}
// -- move composition ----------------------------------------------------------
function selectCell(pile, column) {
    const s = state.session;
    if (!s || s.is_terminal || state.busy)
        return;
    state.draft = {
        column,
        parts: [{ pile, times: 1, increments: {} }],
    };
    state.hint = null;
    render();
}
function submitDraft() {
    const s = state.session;
    if (!s)
        return;
    let move;
    try {
        move = composeMove(s, state.draft);
    }
    catch (err) {
        setError(err instanceof Error ? err.message : String(err));
        return;
    }
    void mutate(() => client.submitMove(s.id, move));
}
async function showHint() {
    const s = state.session;
    if (!s || state.busy)
        return;
    setError("");
    try {
        state.hint = await client.hint(s.id);
    }
    catch (err) {
        setError(err instanceof ServiceApiError ? err.reason : String(err));
        return;
    }
    render();
}
// -- rendering ----------------------------------------------------------------
function hintTargets(hint) {
    const targets = new Set();
    if (!hint || !hint.move)
        return targets;
    const h = Number(hint.move.prime_index);
    for (const part of hint.move.parts) {
        targets.add(`${part.pile}:${h}`);
        for (const q of Object.keys(part.increments)) {
            targets.add(`${part.pile}:${q}`);
        }
    }
    return targets;
}
function render() {
    const s = state.session;
    el("game").hidden = s === null;
    if (!s)
        return;
    const vm = buildViewModel(s);
    renderBadges(vm);
    renderBoard(s, vm);
    renderComposer(s, vm);
    el("hint-btn").disabled = state.busy || vm.terminal;
    el("hint-text").textContent = hintText(state.hint);
}
function hintText(hint) {
    if (!hint)
        return "";
    if (!hint.move)
        return "no winning move: P-position";
    const parts = hint.move.parts
        .map((part) => {
        const incs = Object.entries(part.increments)
            .map(([q, v]) => ` *col${Number(q) + 1}^${v}`)
            .join("");
        return `pile ${Number(part.pile) + 1}: divide ${part.times}x${incs}`;
    })
        .join("; ");
    return `suggested (highlighted): column ${Number(hint.move.prime_index) + 1}, ${parts}`;
}
function renderBadges(vm) {
    const badge = el("classification");
    badge.textContent = vm.classification;
    badge.className = `badge ${vm.classification === "P" ? "badge-p" : "badge-n"}`;
    el("turn").textContent = vm.terminal
        ? "game over"
        : `turn: ${vm.turn}${vm.turn === vm.engineSide ? " (engine)" : " (you)"}`;
    el("can-delay").textContent = vm.canDelay ? "play can still be stalled" : "end moves: no stalling left";
    el("consistency").textContent = vm.consistent
        ? ""
        : "WARNING: client residue check disagrees with the service";
    const banner = el("winner-banner");
    if (vm.terminal && vm.winner) {
        const engineWon = vm.winner === vm.engineSide;
        banner.textContent = `all piles are 1: player ${vm.winner} wins${engineWon ? " (the engine)" : ""}`;
        banner.hidden = false;
    }
    else {
        banner.hidden = true;
    }
}
function renderBoard(s, vm) {
    const table = el("board");
    table.innerHTML = "";
    const header = table.insertRow();
    header.insertCell().textContent = "";
    vm.primes.forEach((p, column) => {
        const cell = header.insertCell();
        cell.textContent = p;
        cell.className = "prime-head" + (state.draft.column === column ? " selected-col" : "");
    });
    const targets = hintTargets(state.hint);
    vm.pileRows.forEach((pile, pileIndex) => {
        const row = table.insertRow();
        row.insertCell().textContent = `pile ${pileIndex + 1}`;
        pile.forEach((value, column) => {
            const cell = row.insertCell();
            const key = `${pileIndex}:${column}`;
            cell.textContent = state.expanded.has(key) ? value : abbreviate(value);
            cell.title = value;
            cell.className = "exp-cell";
            if (state.draft.column === column && state.draft.parts.some((p) => p.pile === pileIndex)) {
                cell.className += " selected";
            }
            if (targets.has(key)) {
                cell.className += " hinted";
            }
            cell.addEventListener("click", () => {
                if (value.length > 30 && !state.expanded.has(key)) {
                    state.expanded.add(key); // first click expands a huge number
                    render();
                    return;
                }
                selectCell(pileIndex, column);
            });
        });
    });
    const totalsRow = table.insertRow();
    totalsRow.className = "totals";
    totalsRow.insertCell().textContent = "total";
    vm.totals.forEach((t) => {
        const cell = totalsRow.insertCell();
        cell.textContent = abbreviate(t);
        cell.title = t;
    });
    const residueRow = table.insertRow();
    residueRow.className = "residues";
    residueRow.insertCell().textContent = `mod ${vm.power}`;
    vm.residues.forEach((r) => {
        const cell = residueRow.insertCell();
        cell.textContent = String(r);
        cell.className = r === 0 ? "residue-zero" : "residue-hot";
    });
}
function renderComposer(s, vm) {
    const composer = el("composer");
    const humanTurn = !vm.terminal && vm.turn !== vm.engineSide;
    composer.hidden = !humanTurn;
    if (!humanTurn)
        return;
    const part = state.draft.parts[0];
    const info = el("selection-info");
    if (state.draft.column === null || part.pile === null) {
        info.textContent = "click the pile cell you want to divide";
    }
    else {
        info.textContent =
            `dividing pile ${part.pile + 1} by ${s.primes[state.draft.column]}` +
                (vm.power > 2 ? ` (x${part.times})` : "");
    }
    const incs = el("increments");
    incs.innerHTML = "";
    if (state.draft.column !== null && part.pile !== null) {
        s.primes.forEach((p, column) => {
            if (column <= state.draft.column)
                return;
            const label = document.createElement("label");
            label.textContent = `*${p}^`;
            const input = document.createElement("input");
            input.type = "text";
            input.size = 6;
            input.value = part.increments[column] ?? "";
            input.addEventListener("input", () => {
                part.increments[column] = input.value;
                const problem = validateDraft(s, state.draft);
                el("draft-problem").textContent = problem ?? "";
            });
            label.appendChild(input);
            incs.appendChild(label);
        });
    }
    // multi-part division only exists past the base game
    const advanced = el("advanced");
    advanced.hidden = vm.power <= 2;
    if (!advanced.hidden && part.pile !== null) {
        const times = el("times-input");
        times.max = String(vm.power - 1);
        times.value = String(part.times);
    }
    const problem = validateDraft(s, state.draft);
    el("draft-problem").textContent =
        state.draft.column === null ? "" : problem ?? "";
    el("submit-btn").disabled = state.busy || problem !== null;
}
function addPart() {
    // advanced composer: a second row wired by pile number input
    const s = state.session;
    if (!s)
        return;
    const pileText = prompt("add part: pile number (1-based)");
    if (!pileText)
        return;
    const pile = Number(pileText) - 1;
    state.draft.parts.push({ pile, times: 1, increments: {} });
    render();
}
export function init() {
    el("new-game-btn").addEventListener("click", () => void newGame());
    el("submit-btn").addEventListener("click", () => submitDraft());
    el("hint-btn").addEventListener("click", () => void showHint());
    el("add-part-btn").addEventListener("click", () => addPart());
    el("times-input").addEventListener("input", () => {
        state.draft.parts[0].times = Number(el("times-input").value) || 1;
        render();
    });
    el("delay-r").addEventListener("input", () => {
        el("delay-label").textContent = `engine stall r = ${el("delay-r").value}`;
    });
    setStatus("");
}
if (typeof document !== "undefined" && document.getElementById("new-game-btn")) {
    init();
}
